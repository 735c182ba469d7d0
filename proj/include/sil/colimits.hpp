#pragma once

#include <optional>
#include <stdexcept>

#include "sil/abstract_class.hpp"
#include "sil/diagrams.hpp"
#include "sil/report.hpp"

namespace sil {

struct UnsupportedOperation : std::logic_error {
    using std::logic_error::logic_error;
};

struct PushoutResult {
    Amalgam cocone;
    bool in_class = true;
    // The induced map P -> competitor.n, if the competitor commutes with it.
    std::optional<std::vector<int>> mediator(const Amalgam& competitor) const;
};

// Throws UnsupportedOperation when the class has no pushouts.
PushoutResult pushout(const AbstractClass& cls, const Span& s);

// Intersection of the images with the induced structure, as a span.
struct PullbackResult {
    Span span;
    Mask image;  // the intersection inside N
};
PullbackResult pullback(const Structure& n, const StructPtr& m1, const std::vector<int>& g1, const StructPtr& m2,
                        const std::vector<int>& g2);

TriBool is_regular_mono(const AbstractClass& cls, const Structure& src, const Structure& tgt,
                        const std::vector<int>& map);

bool is_pullback_square(const Amalgam& a);
bool is_pullback_square(const Square& q);

struct EffectiveSquareVerdict {
    bool is_pullback = false;
    TriBool induced_map_regular = TriBool::Inconclusive;
    std::optional<json> witness;
    TriBool verdict() const;
};

// Requires a pushout; throws UnsupportedOperation otherwise.
EffectiveSquareVerdict is_effective_square(const AbstractClass& cls, const Square& q);
EffectiveSquareVerdict is_effective_square(const AbstractClass& cls, const Amalgam& a);

// Pushout squares of spans of members within the bound are pullbacks, with
// regular legs.
CheckReport verify_ringel(const AbstractClass& cls, int bound);
// Every pullback square inside a member within the bound has a regular
// comparison map from the pushout.
CheckReport check_effective_unions(const AbstractClass& cls, int bound);

}  // namespace sil
