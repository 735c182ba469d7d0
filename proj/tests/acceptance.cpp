// One line per acceptance criterion; exit status 1 when any is red.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "sil/catalog.hpp"
#include "sil/colimits.hpp"
#include "sil/experiments.hpp"
#include "sil/galois.hpp"
#include "sil/io.hpp"

using namespace sil;

namespace {

CheckBudget at(int bound) {
    CheckBudget b;
    b.bound = bound;
    return b;
}

bool holds(const CheckReport& r) { return r.verdict == TriBool::Holds; }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (!pass) detail << "; ";
        pass = false;
        detail << what;
    }
};

struct Criterion {
    int id;
    std::string title;
    std::function<void(Outcome&)> run;
};

// The classes swept by the catalog-wide criteria, at their bounds.
const std::vector<std::pair<std::string, int>>& catalog() {
    static const std::vector<std::pair<std::string, int>> c{
        {"finset", 3}, {"graph", 3}, {"klocal_graph:2", 3}, {"vecspace:2", 2}, {"multigraph", 2}};
    return c;
}

// Verdicts per (class, relation, check), computed once.
class Verdicts {
public:
    TriBool get(const std::string& cls, const std::string& rel, const std::string& check, int bound) {
        auto key = cls + "|" + rel + "|" + check + "|" + std::to_string(bound);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        auto c = make_class(cls);
        auto r = make_relation(rel, c);
        auto b = at(bound);
        TriBool v;
        if (check == "existence") v = check_existence(r, *c, b).verdict;
        else if (check == "uniqueness") v = check_uniqueness(r, *c, b, &atlas(cls, bound)).verdict;
        else if (check == "transitivity-right") v = check_transitivity(r, *c, b, Side::Right).verdict;
        else if (check == "transitivity-left") v = check_transitivity(r, *c, b, Side::Left).verdict;
        else if (check == "local-character") v = check_local_character(r, *c, parse_lambda("a+2"), b).verdict;
        else if (check == "symmetry") v = check_symmetry(r, *c, b).verdict;
        else if (check == "suite") {
            SuiteOptions o;
            o.budget = b;
            v = run_axiom_suite(r, c, o).verdict();
        } else throw std::logic_error(check);
        return memo_[key] = v;
    }

    bool all(const std::string& cls, const std::string& rel, int bound, std::initializer_list<const char*> checks) {
        for (auto ch : checks)
            if (get(cls, rel, ch, bound) != TriBool::Holds) return false;
        return true;
    }

    const Atlas& atlas(const std::string& cls, int bound) {
        auto key = cls + "|" + std::to_string(bound);
        auto it = atlases_.find(key);
        if (it == atlases_.end()) it = atlases_.emplace(key, std::make_unique<Atlas>(*make_class(cls), bound)).first;
        return *it->second;
    }

private:
    std::map<std::string, TriBool> memo_;
    std::map<std::string, std::unique_ptr<Atlas>> atlases_;
};

Verdicts verdicts;

StructPtr half_graph(int k) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) edges.push_back({i, k + j});
    return make_graph(2 * k, edges);
}

bool single_points_over_empty(const json& span) {
    return span["M0"]["universe"].empty() && span["M1"]["universe"].size() == 1 && span["M2"]["universe"].size() == 1;
}

// The pairs of criterion 1.
const std::vector<std::tuple<std::string, std::string, int>>& positive_catalog() {
    static const std::vector<std::tuple<std::string, std::string, int>> p{{"intersection", "finset", 3},
                                                                          {"intersection", "vecspace:2", 2},
                                                                          {"no_cross_edges", "klocal_graph:2", 3},
                                                                          {"effective_pullback_rel", "finset", 3}};
    return p;
}

std::vector<Criterion> criteria() {
    std::vector<Criterion> out;

    out.push_back({1, "axiom suite on the positive catalog", [](Outcome& o) {
                       for (auto& [rel, cls, bound] : positive_catalog()) {
                           auto c = make_class(cls);
                           SuiteOptions opt;
                           opt.budget = at(bound);
                           auto b = run_axiom_suite(make_relation(rel, c), c, opt);
                           for (auto& r : b.reports)
                               o.require(holds(r), rel + "/" + cls + " " + r.check + " " + to_string(r.verdict));
                       }
                   }});

    out.push_back({2, "counterexample catalog", [](Outcome& o) {
                       auto g = make_class("graph");
                       auto t = check_transitivity(make_relation("mixed_bad", g), *g, at(4), Side::Right);
                       o.require(t.verdict == TriBool::Fails && !t.witnesses.empty(), "mixed_bad transitivity");
                       auto u = check_uniqueness(make_relation("pullback_rel", g), *g, at(3));
                       bool two = false;
                       for (auto& w : u.witnesses) two |= single_points_over_empty(w["span"]);
                       o.require(u.verdict == TriBool::Fails && two, "pullback_rel uniqueness witness");
                       auto m = check_monotonicity(make_relation("iso_type_switch", g), *g, at(3), Side::Right);
                       o.require(m.verdict == TriBool::Fails && !m.witnesses.empty(), "iso_type_switch monotonicity");
                       o.detail << (o.pass ? "all three found" : "");
                   }});

    out.push_back({3, "pushouts of regular monos are pullbacks", [](Outcome& o) {
                       for (auto [cls, bound] : std::vector<std::pair<std::string, int>>{
                                {"finset", 4}, {"graph", 3}, {"vecspace:2", 3}, {"module:4", 16}}) {
                           auto r = verify_ringel(*make_class(cls), bound);
                           o.require(holds(r) && r.configurations > 0, cls + " " + to_string(r.verdict));
                       }
                   }});

    out.push_back({4, "effective unions", [](Outcome& o) {
                       auto g = check_effective_unions(*make_class("graph"), 2);
                       o.require(g.verdict == TriBool::Fails && g.witnesses.size() == 1, "graph should fail once");
                       if (g.witnesses.size() == 1) {
                           auto& w = g.witnesses[0];
                           auto n = structure_from_json(w["N"]);
                           o.require(n.size() == 2 && n.rel2(0, 0, 1) && w["M0"].empty() && w["M1"].size() == 1 &&
                                         w["M2"].size() == 1,
                                     "graph witness is not the two ends of an edge");
                       }
                       o.require(holds(check_effective_unions(*make_class("finset"), 4)), "finset");
                       o.require(holds(check_effective_unions(*make_class("multigraph"), 3)), "multigraph");
                   }});

    out.push_back({5, "effective pullbacks equal pullbacks under effective unions", [](Outcome& o) {
                       for (auto [cls, bound] : std::vector<std::pair<std::string, int>>{{"finset", 3}, {"vecspace:2", 2}}) {
                           auto c = make_class(cls);
                           auto r = differential_compare(make_relation("pullback_rel", c),
                                                         make_relation("effective_pullback_rel", c), *c, at(bound));
                           o.require(holds(r), cls + " disagrees");
                       }
                       auto g = make_class("graph");
                       auto r = differential_compare(make_relation("pullback_rel", g),
                                                     make_relation("effective_pullback_rel", g), *g, at(3));
                       bool edge = false;
                       for (auto& w : r.witnesses) {
                           auto n = structure_from_json(w["N"]);
                           edge |= n.size() == 2 && n.rel2(0, 0, 1) && w["M0"].empty();
                       }
                       o.require(r.verdict == TriBool::Fails && edge, "graph lacks the edge-amalgam disagreement");
                   }});

    out.push_back({6, "effective pullbacks in graphs are no_cross_edges", [](Outcome& o) {
                       auto g = make_class("graph");
                       auto r = differential_compare(make_relation("effective_pullback_rel", g),
                                                     make_relation("no_cross_edges", g), *g, at(4));
                       o.require(holds(r), "disagreement at " + std::to_string(r.witnesses.size()) + " squares");
                       o.detail << r.configurations << " squares";
                   }});

    out.push_back({7, "canonicity by coherent choices", [](Outcome& o) {
                       for (auto [cls, rel] : std::vector<std::pair<std::string, std::string>>{
                                {"finset", "intersection"}, {"klocal_graph:2", "no_cross_edges"}}) {
                           auto c = make_class(cls);
                           auto res = canonicity_search(c, CanonicityOptions{});
                           bool ok = res.survivor_count == 1 &&
                                     extensionally_equal(*res.survivors[0], *make_relation(rel, c), *c, 3);
                           o.require(ok, cls + ": " + std::to_string(res.survivor_count) + " survivors");
                       }
                   }});

    out.push_back({8, "existence, uniqueness and transitivity bring the derived lemmas", [](Outcome& o) {
                       int qualified = 0;
                       for (auto& [cls, bound] : catalog()) {
                           auto c = make_class(cls);
                           for (auto& rel : relation_names()) {
                               if (!relation_compatible(rel, *c)) continue;
                               if (!verdicts.all(cls, rel, bound, {"existence", "uniqueness", "transitivity-right"}))
                                   continue;
                               ++qualified;
                               auto r = make_relation(rel, c);
                               auto b = at(bound);
                               o.require(holds(check_monotonicity(r, *c, b, Side::Right)), rel + "/" + cls + " monotonicity");
                               o.require(holds(check_base_monotonicity(r, *c, b)), rel + "/" + cls + " base monotonicity");
                               o.require(holds(check_isomorphism_lemma(r, *c, b)), rel + "/" + cls + " isomorphism lemma");
                           }
                       }
                       o.detail << (o.pass ? std::to_string(qualified) + " qualifying pairs" : "");
                   }});

    out.push_back({9, "symmetry for free", [](Outcome& o) {
                       int qualified = 0;
                       for (auto& [cls, bound] : catalog()) {
                           auto c = make_class(cls);
                           for (auto& rel : relation_names()) {
                               if (!relation_compatible(rel, *c)) continue;
                               if (!verdicts.all(cls, rel, bound,
                                                 {"existence", "uniqueness", "transitivity-right", "transitivity-left",
                                                  "local-character"}))
                                   continue;
                               ++qualified;
                               o.require(verdicts.get(cls, rel, "symmetry", bound) == TriBool::Holds, rel + "/" + cls);
                           }
                       }
                       o.detail << (o.pass ? std::to_string(qualified) + " qualifying pairs" : "");
                   }});

    out.push_back({10, "order property", [](Outcome& o) {
                       auto g = make_class("graph");
                       auto w = find_order_property(*g, 2, 4, 8);
                       o.require(w && are_isomorphic(w->m, half_graph(4)) && verify_order_witness(*g, *w),
                                 "graph: no half-graph witness");
                       o.require(!find_order_property(*make_class("finset"), 1, 3, 6), "finset alpha 1");
                       auto kl = make_class("klocal_graph:2");
                       for (int a : {1, 2}) o.require(!find_order_property(*kl, a, 3, 6), "klocal alpha " + std::to_string(a));
                       for (auto& [rel, cls, bound] : positive_catalog()) {
                           if (verdicts.get(cls, rel, "suite", bound) != TriBool::Holds) continue;
                           auto c = make_class(cls);
                           // Dimension 3 already has more than six vectors.
                           int size = cls.rfind("vecspace", 0) == 0 ? 3 : 6;
                           for (int a : {1, 2})
                               o.require(!find_order_property(*c, a, 3, size), cls + " alpha " + std::to_string(a));
                       }
                   }});

    out.push_back({11, "type counts and tameness", [](Outcome& o) {
                       for (auto spec : {"finset", "graph"}) {
                           auto c = make_class(spec);
                           for (auto& m : c->members(4)) {
                               int n = m->size();
                               auto cert = count_types(*c, m, 1);
                               auto search = count_types(*c, m, 1, 0, true);
                               std::int64_t expect = std::string(spec) == "finset" ? n + 1 : (1 << n) + n;
                               std::string at_m = std::string(spec) + " |M|=" + std::to_string(n);
                               o.require(cert.count == expect && cert.stable, at_m + " closed form");
                               o.require(search.count == cert.count && search.verdict == TriBool::Holds,
                                         at_m + " search oracle");
                           }
                           o.require(holds(check_tameness(*c, 1, 2, 3)), std::string(spec) + " tameness");
                       }
                   }});

    out.push_back({12, "NF-bar laws", [](Outcome& o) {
                       for (auto [rel, cls] : std::vector<std::pair<std::string, std::string>>{
                                {"intersection", "finset"}, {"no_cross_edges", "klocal_graph:2"}}) {
                           auto c = make_class(cls);
                           auto b = nfbar_laws(make_relation(rel, c), *c, at(3));
                           o.require(b.reports.size() == 8, rel + "/" + cls + " law count");
                           for (auto& r : b.reports)
                               o.require(holds(r), rel + "/" + cls + " " + r.check + " " + to_string(r.verdict));
                       }
                   }});

    out.push_back({13, "independent squares are pullbacks", [](Outcome& o) {
                       int qualified = 0;
                       for (auto& [cls, bound] : catalog()) {
                           if (bound != 3 && cls != "vecspace:2") continue;
                           auto c = make_class(cls);
                           for (auto& rel : relation_names()) {
                               if (!relation_compatible(rel, *c)) continue;
                               if (!verdicts.all(cls, rel, bound,
                                                 {"existence", "uniqueness", "transitivity-right", "transitivity-left"}))
                                   continue;
                               if (verdicts.get(cls, rel, "suite", bound) != TriBool::Holds) continue;
                               ++qualified;
                               auto r = verify_pullback_consequence(make_relation(rel, c), *c, at(bound));
                               o.require(holds(r) && !r.notes.empty(), rel + "/" + cls);
                           }
                       }
                       o.require(qualified > 0, "no relation passed the full suite");
                       o.detail << (o.pass ? std::to_string(qualified) + " relations, homogeneity weakening noted" : "");
                   }});
    return out;
}

}  // namespace

int main() {
    int red = 0;
    for (auto& c : criteria()) {
        Outcome o;
        Stopwatch sw;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("error: ") + e.what());
        }
        red += !o.pass;
        std::printf("%s  %2d  %s  (%.1f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), sw.ms() / 1000,
                    o.detail.str().empty() ? "" : "  ", o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 13 criteria pass\n", 13 - red);
    return red ? 1 : 0;
}
