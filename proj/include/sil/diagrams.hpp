#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sil/abstract_class.hpp"
#include "sil/relation.hpp"
#include "sil/report.hpp"

namespace sil {

// f1: M0 -> M1, f2: M0 -> M2 as element maps.
struct Span {
    StructPtr m0, m1, m2;
    std::vector<int> f1, f2;
};

struct Amalgam {
    Span span;
    StructPtr n;
    std::vector<int> g1, g2;
};

struct SearchBudget {
    int max_codomain = 0;  // 0: joint measure of the two codomains
    int max_depth = 2;
};

struct SpanMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

bool same_span(const Span& a, const Span& b);
bool commutes(const Amalgam& a);
Amalgam dual_diagram(const Amalgam& a);
// Every arrow strong in the class and the square commutes.
bool valid_amalgam(const AbstractClass& cls, const Amalgam& a);

// Inclusion form (N, images) and back. The square's codomain becomes the
// induced structure on s3.
Square to_square(const Amalgam& a);
Amalgam from_square(const Square& q);
StructPtr induced_ptr(const Structure& n, Mask s);
// Positions of the elements of `inner` inside the sorted elements of `outer`.
std::vector<int> inclusion_map(Mask inner, Mask outer);

// Spans over members of measure <= bound, one per isomorphism class of
// spans, in a fixed order.
std::vector<Span> enumerate_spans(const AbstractClass& cls, int bound);
// Measure of the pushout when the class has one, else |M1| + |M2| - |M0|.
int span_size(const AbstractClass& cls, const Span& s);

// Amalgams with codomain measure <= max_codomain, one per isomorphism class
// of diagrams fixing the span. By default only codomains generated by the two
// leg images; `all` adds codomains with further elements.
std::vector<Amalgam> enumerate_amalgams(const AbstractClass& cls, const Span& s, int max_codomain,
                                        bool all = false);

struct Equivalence {
    TriBool verdict = TriBool::Inconclusive;
    json witness;
    std::string note;
};
Equivalence amalgams_equivalent(const AbstractClass& cls, const Amalgam& a, const Amalgam& b,
                                const SearchBudget& budget = {});

// Key of the substructure generated by the two leg images, with the span
// elements marked. Equivalent amalgams share it.
std::string generated_key(const Amalgam& a);
// Isomorphism-invariant key of an inclusion-form square.
std::string diagram_key(const Square& q);
std::string span_key(const Span& s);

json span_to_json(const Span& s);
json amalgam_to_json(const Amalgam& a);
json square_to_json(const Square& q);
// {"M0": file-or-inline, "M1", "M2", "N", "f1", "f2", "g1", "g2": [[src, tgt], ...]}.
// Relative file paths resolve against `base_dir`.
Amalgam amalgam_from_json(const json& j, const std::string& base_dir);

// All spans within a bound with their amalgams and ~-classes.
struct SpanEntry {
    Span span;
    int size = 0;
    std::vector<Amalgam> amalgams;
    std::vector<int> component;  // class id per amalgam, 0-based, dense
    int components = 0;
    bool conclusive = true;      // every pairwise equivalence was decided
    std::vector<std::string> notes;
};

class Atlas {
public:
    Atlas(const AbstractClass& cls, int bound, const SearchBudget& budget = {});
    const AbstractClass& cls() const { return *cls_; }
    int bound() const { return bound_; }
    const std::vector<SpanEntry>& spans() const { return spans_; }
    // (span index, amalgam index) of a square whose every piece is within
    // the bound, if the square was enumerated.
    std::optional<std::pair<int, int>> find(const Square& q) const;
    // Every enumerated amalgam with the square's isomorphism type; several
    // when a span automorphism moves one amalgam onto another.
    const std::vector<std::pair<int, int>>* find_all(const Square& q) const;
    bool inconclusive() const;

private:
    const AbstractClass* cls_;
    int bound_;
    std::vector<SpanEntry> spans_;
    std::map<std::string, std::vector<std::pair<int, int>>> by_key_;
};

}  // namespace sil
