#pragma once

#include <memory>
#include <string>

#include "sil/structures.hpp"

namespace sil {

// An amalgamation diagram in inclusion form: base s0, sides s1 and s2, and
// codomain s3, all carriers of the ambient structure n.
struct Square {
    const Structure* n;
    Mask s0, s1, s2, s3;
};

class Relation {
public:
    virtual ~Relation() = default;
    virtual std::string name() const = 0;
    // Must be pure: checkers call it concurrently.
    virtual bool decide(const Square& q) const = 0;
    // Set-based nonforking (A, B arbitrary subsets of n, m0 a carrier).
    virtual bool has_direct() const { return false; }
    virtual bool direct_nonfork(const Structure&, Mask, Mask, Mask) const { return false; }
};

using RelPtr = std::shared_ptr<const Relation>;

// Swaps the two sides.
RelPtr dual_relation(RelPtr r);

}  // namespace sil
