#include "sil/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sil {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

std::vector<std::pair<std::string, int>> arities(const json& j, const std::string& where) {
    std::vector<std::pair<std::string, int>> out;
    if (j.is_null()) return out;
    if (!j.is_object()) bad(where, "expected an object of symbol -> arity");
    for (auto& [k, v] : j.items()) {
        if (!v.is_number_integer()) bad(where + "." + k, "arity must be an integer");
        out.emplace_back(k, v.get<int>());
    }
    return out;
}

}  // namespace

VocabPtr vocabulary_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("vocabulary: expected an object");
    try {
        return make_vocabulary(arities(j.value("relations", json::object()), "vocabulary.relations"),
                               arities(j.value("functions", json::object()), "vocabulary.functions"));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("vocabulary: ") + e.what());
    }
}

json vocabulary_to_json(const Vocabulary& v) {
    json j;
    j["relations"] = json::object();
    j["functions"] = json::object();
    for (auto& [n, a] : v.relations) j["relations"][n] = a;
    for (auto& [n, a] : v.functions) j["functions"][n] = a;
    return j;
}

Structure structure_from_json(const json& j, const std::string& where, const VocabPtr& vocab) {
    if (!j.is_object()) bad(where, "expected an object");
    if (!j.contains("vocabulary")) bad(where, "missing field 'vocabulary'");
    VocabPtr v;
    try {
        v = vocabulary_from_json(j["vocabulary"]);
    } catch (const ParseError& e) {
        bad(where, e.what());
    }
    if (vocab) {
        if (!(*vocab == *v)) bad(where + ".vocabulary", "does not match the class vocabulary");
        v = vocab;
    }
    if (!j.contains("universe") || !j["universe"].is_array()) bad(where, "missing array 'universe'");
    std::vector<int> ids;
    for (auto& e : j["universe"]) {
        if (!e.is_number_integer() || e.get<long long>() < 0)
            bad(where + ".universe", "element ids must be non-negative integers");
        ids.push_back(e.get<int>());
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) bad(where + ".universe", "duplicate element id");
    std::map<int, int> pos;
    for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = static_cast<int>(i);
    auto elem = [&](const json& e, const std::string& at) {
        if (!e.is_number_integer()) bad(at, "element must be an integer");
        auto it = pos.find(e.get<int>());
        if (it == pos.end()) bad(at, "element " + e.dump() + " is not in the universe");
        return it->second;
    };

    Structure s(v, static_cast<int>(ids.size()));
    s.set_labels(ids);
    json rels = j.value("relations", json::object());
    json fns = j.value("functions", json::object());
    if (!rels.is_object()) bad(where + ".relations", "expected an object");
    if (!fns.is_object()) bad(where + ".functions", "expected an object");
    for (auto& [name, tuples] : rels.items()) {
        int r = v->relation_index(name);
        std::string at = where + ".relations." + name;
        if (r < 0) bad(at, "symbol not in the vocabulary");
        if (!tuples.is_array()) bad(at, "expected a list of tuples");
        int ar = v->relations[r].second;
        std::vector<int> t(ar);
        for (std::size_t k = 0; k < tuples.size(); ++k) {
            const json& tup = tuples[k];
            std::string at2 = at + "[" + std::to_string(k) + "]";
            if (!tup.is_array() || static_cast<int>(tup.size()) != ar)
                bad(at2, "tuple must have length " + std::to_string(ar));
            for (int i = 0; i < ar; ++i) t[i] = elem(tup[i], at2);
            s.set_rel(r, t.data(), true);
        }
    }
    for (auto& [name, table] : fns.items()) {
        int f = v->function_index(name);
        std::string at = where + ".functions." + name;
        if (f < 0) bad(at, "symbol not in the vocabulary");
        if (!table.is_array()) bad(at, "expected a list of [args, value] entries");
        int ar = v->functions[f].second;
        std::set<std::size_t> seen;
        std::vector<int> t(ar);
        for (std::size_t k = 0; k < table.size(); ++k) {
            const json& row = table[k];
            std::string at2 = at + "[" + std::to_string(k) + "]";
            if (!row.is_array() || row.size() != 2 || !row[0].is_array() || static_cast<int>(row[0].size()) != ar)
                bad(at2, "entry must be [[" + std::to_string(ar) + " args], value]");
            for (int i = 0; i < ar; ++i) t[i] = elem(row[0][i], at2);
            if (!seen.insert(s.tuple_index(t.data(), ar)).second) bad(at2, "argument tuple listed twice");
            s.set_fn(f, t.data(), elem(row[1], at2));
        }
        std::size_t need = 1;
        for (int i = 0; i < ar; ++i) need *= ids.size();
        if (seen.size() != need) bad(at, "function table is not total");
    }
    for (auto& [name, ar] : v->functions)
        if (!fns.contains(name) && !ids.empty()) bad(where + ".functions." + name, "missing function table");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        bad(where, e.what());
    }
    return s;
}

json structure_to_json(const Structure& s) {
    json j;
    j["vocabulary"] = vocabulary_to_json(s.vocab());
    const auto& lab = s.labels();
    j["universe"] = lab;
    j["relations"] = json::object();
    for (int r = 0; r < static_cast<int>(s.vocab().relations.size()); ++r) {
        json ts = json::array();
        for (auto& t : s.tuples(r)) {
            json tj = json::array();
            for (int x : t) tj.push_back(lab[x]);
            ts.push_back(tj);
        }
        j["relations"][s.vocab().relations[r].first] = ts;
    }
    j["functions"] = json::object();
    for (int f = 0; f < static_cast<int>(s.vocab().functions.size()); ++f) {
        json rows = json::array();
        int ar = s.arity_f(f);
        if (s.size() > 0)
            for_each_tuple(s.size(), ar, [&](const int* t) {
                json args = json::array();
                for (int i = 0; i < ar; ++i) args.push_back(lab[t[i]]);
                rows.push_back(json::array({args, lab[s.fn(f, t)]}));
            });
        j["functions"][s.vocab().functions[f].first] = rows;
    }
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Structure read_structure_file(const std::string& path, const VocabPtr& vocab) {
    return structure_from_json(read_json_file(path), path, vocab);
}

json mask_to_json(const Structure& s, Mask m) {
    json j = json::array();
    for (int x : mask_elements(m)) j.push_back(s.labels()[x]);
    return j;
}

json map_to_json(const Structure& src, const Structure& tgt, const std::vector<int>& map) {
    json j = json::array();
    for (std::size_t i = 0; i < map.size(); ++i)
        j.push_back(json::array({src.labels()[i], tgt.labels()[map[i]]}));
    return j;
}

}  // namespace sil
