#include "sil/report.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace sil {

const char* to_string(TriBool t) {
    switch (t) {
        case TriBool::Holds: return "HOLDS";
        case TriBool::Fails: return "FAILS";
        case TriBool::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

TriBool tribool_from_string(const std::string& s) {
    if (s == "HOLDS") return TriBool::Holds;
    if (s == "FAILS") return TriBool::Fails;
    if (s == "INCONCLUSIVE") return TriBool::Inconclusive;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

TriBool tri_and(TriBool a, TriBool b) {
    if (a == TriBool::Fails || b == TriBool::Fails) return TriBool::Fails;
    if (a == TriBool::Inconclusive || b == TriBool::Inconclusive) return TriBool::Inconclusive;
    return TriBool::Holds;
}

void CheckReport::fail(json witness) {
    verdict = TriBool::Fails;
    witnesses.push_back(std::move(witness));
}

void CheckReport::inconclusive(const std::string& why) {
    if (verdict == TriBool::Holds) verdict = TriBool::Inconclusive;
    for (auto& n : notes)
        if (n == why) return;
    notes.push_back(why);
}

void CheckReport::absorb(const CheckReport& sub) {
    verdict = tri_and(verdict, sub.verdict);
    witnesses.insert(witnesses.end(), sub.witnesses.begin(), sub.witnesses.end());
    configurations += sub.configurations;
    for (auto& n : sub.notes) {
        bool dup = false;
        for (auto& m : notes) dup = dup || m == n;
        if (!dup) notes.push_back(n);
    }
}

bool CheckReport::operator==(const CheckReport& o) const {
    return check == o.check && verdict == o.verdict && witnesses == o.witnesses &&
           configurations == o.configurations && bound == o.bound && notes == o.notes;
}

json to_json(const CheckReport& r, bool with_timing) {
    json j;
    j["check"] = r.check;
    j["verdict"] = to_string(r.verdict);
    j["bound"] = r.bound;
    j["configurations"] = r.configurations;
    j["witnesses"] = r.witnesses;
    j["notes"] = r.notes;
    if (with_timing) j["wall_ms"] = r.wall_ms;
    return j;
}

CheckReport report_from_json(const json& j) {
    CheckReport r;
    r.check = j.at("check").get<std::string>();
    r.verdict = tribool_from_string(j.at("verdict").get<std::string>());
    r.bound = j.at("bound").get<int>();
    r.configurations = j.at("configurations").get<std::int64_t>();
    for (auto& w : j.at("witnesses")) r.witnesses.push_back(w);
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("wall_ms")) r.wall_ms = j["wall_ms"].get<double>();
    return r;
}

std::string render_text(const CheckReport& r) {
    std::ostringstream os;
    os << r.check << ": " << to_string(r.verdict) << "  (bound " << r.bound << ", " << r.configurations
       << " configurations)\n";
    for (auto& n : r.notes) os << "  note: " << n << "\n";
    std::size_t shown = 0;
    for (auto& w : r.witnesses) {
        if (shown++ == 3) {
            os << "  ... " << (r.witnesses.size() - 3) << " more witnesses\n";
            break;
        }
        os << "  witness: " << w.dump() << "\n";
    }
    return os.str();
}

TriBool ReportBundle::verdict() const {
    TriBool v = TriBool::Holds;
    for (auto& r : reports) v = tri_and(v, r.verdict);
    return v;
}

json to_json(const ReportBundle& b, bool with_timing) {
    json j;
    j["title"] = b.title;
    j["verdict"] = to_string(b.verdict());
    j["reports"] = json::array();
    for (auto& r : b.reports) j["reports"].push_back(to_json(r, with_timing));
    return j;
}

ReportBundle bundle_from_json(const json& j) {
    ReportBundle b;
    b.title = j.at("title").get<std::string>();
    for (auto& r : j.at("reports")) b.reports.push_back(report_from_json(r));
    return b;
}

std::string render_text(const ReportBundle& b) {
    std::ostringstream os;
    os << "== " << b.title << " ==\n";
    for (auto& r : b.reports) os << render_text(r);
    os << "overall: " << to_string(b.verdict()) << "\n";
    return os.str();
}

Stopwatch::Stopwatch()
    : start_(std::chrono::duration_cast<std::chrono::microseconds>(
                 std::chrono::steady_clock::now().time_since_epoch())
                 .count()) {}

double Stopwatch::ms() const {
    auto now = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
                   .count();
    return static_cast<double>(now - start_) / 1000.0;
}

}  // namespace sil
