#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace sil {

using json = nlohmann::ordered_json;

enum class TriBool { Holds, Fails, Inconclusive };

const char* to_string(TriBool t);
TriBool tribool_from_string(const std::string& s);

// Fails dominates Inconclusive dominates Holds.
TriBool tri_and(TriBool a, TriBool b);
inline TriBool tri(bool b) { return b ? TriBool::Holds : TriBool::Fails; }

struct CheckReport {
    std::string check;
    TriBool verdict = TriBool::Holds;
    std::vector<json> witnesses;
    std::int64_t configurations = 0;
    int bound = 0;
    double wall_ms = 0;
    std::vector<std::string> notes;

    void fail(json witness);
    void inconclusive(const std::string& why);
    // Merge a sub-check: verdicts combine, witnesses and counts accumulate.
    void absorb(const CheckReport& sub);
    bool operator==(const CheckReport& o) const;
};

json to_json(const CheckReport& r, bool with_timing = true);
CheckReport report_from_json(const json& j);

// Stable text rendering, one report per block.
std::string render_text(const CheckReport& r);

// A set of named reports, as produced by suites.
struct ReportBundle {
    std::string title;
    std::vector<CheckReport> reports;
    TriBool verdict() const;
    bool operator==(const ReportBundle& o) const { return title == o.title && reports == o.reports; }
};

json to_json(const ReportBundle& b, bool with_timing = true);
ReportBundle bundle_from_json(const json& j);
std::string render_text(const ReportBundle& b);

class Stopwatch {
public:
    Stopwatch();
    double ms() const;

private:
    std::int64_t start_;
};

}  // namespace sil
