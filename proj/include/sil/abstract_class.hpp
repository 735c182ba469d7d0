#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sil/report.hpp"
#include "sil/structures.hpp"

namespace sil {

// Pushout of a span, with legs M1 -> P and M2 -> P. `in_class` is false when
// the square was formed in an ambient category the class does not contain
// (bounded-degree graphs use the pushout of all graphs).
struct Pushout {
    StructPtr p;
    std::vector<int> leg1, leg2;
    bool in_class = true;
};

class AbstractClass {
public:
    virtual ~AbstractClass() = default;

    virtual std::string name() const = 0;
    virtual const VocabPtr& vocab() const = 0;
    virtual bool member(const Structure& s) const = 0;

    // Strong embeddings. Built-ins use every embedding between members.
    virtual bool strong(const Structure& src, const Structure& tgt, const std::vector<int>& map) const {
        return is_embedding(src, tgt, map);
    }

    // Size measure used by bounds: element count, or dimension for vector spaces.
    virtual int measure(const Structure& s) const { return s.size(); }
    virtual std::string measure_name() const { return "size"; }
    // Upper bound on the measure of a member generated by two members.
    virtual int joint_measure(int a, int b) const { return a + b; }

    // Every closed subset of a member induces a member, strong in it.
    virtual bool hereditary() const { return true; }
    // Galois types are decided by the isomorphism type of type_closure.
    virtual bool types_complete() const { return false; }
    virtual Mask type_closure(const Structure& n, Mask s) const { return generated(n, s); }

    virtual bool has_pushout() const { return false; }
    // The pushout of every span lies in the class.
    virtual bool pushouts_in_class() const { return false; }
    virtual std::optional<Pushout> pushout(const Structure& m0, const Structure& m1, const Structure& m2,
                                           const std::vector<int>& f1, const std::vector<int>& f2) const;
    // `map` is a homomorphism and may be non-injective.
    virtual TriBool regular_mono(const Structure& src, const Structure& tgt, const std::vector<int>& map) const;
    virtual bool regular_registered() const { return false; }

    // One member per isomorphism class with measure <= bound, ordered by
    // (measure, size, tuple count, canonical key).
    const std::vector<StructPtr>& members(int bound) const;
    // Automorphism group; `m` must be kept alive by the caller or be a member.
    const std::vector<std::vector<int>>& automorphisms_of(const StructPtr& m) const;
    // Carriers of strong substructures, ascending as integers.
    const std::vector<Mask>& carriers(const StructPtr& n) const;
    std::vector<Mask> carriers_of(const Structure& n) const;
    // Smallest carrier containing s (generated substructure).
    Mask closure(const Structure& n, Mask s) const;

    // Index into members(bound) of the member isomorphic to s plus an
    // isomorphism s -> member.
    std::optional<std::pair<int, std::vector<int>>> locate(const Structure& s, int bound) const;

protected:
    // Not necessarily deduplicated or sorted; members() takes care of both.
    virtual std::vector<StructPtr> generate(int bound) const = 0;

private:
    struct MemberTable {
        std::vector<StructPtr> list;
        std::map<std::string, int> index;
    };
    const MemberTable& table(int bound) const;

    mutable std::recursive_mutex mu_;
    mutable std::map<int, MemberTable> members_;
    mutable std::map<const Structure*, std::pair<StructPtr, std::vector<std::vector<int>>>> auts_;
    mutable std::map<const Structure*, std::pair<StructPtr, std::vector<Mask>>> carriers_;
};

using ClassPtr = std::shared_ptr<const AbstractClass>;

// Pushout-free mediator: the unique homomorphism P -> N agreeing with the
// legs, found by propagation from the leg images. None if it does not exist.
std::optional<std::vector<int>> mediating_map(const Pushout& po, const Structure& n, const std::vector<int>& g1,
                                              const std::vector<int>& g2);

// Coherence, identity and composition of strong embeddings over all members
// of measure <= bound.
CheckReport check_coherence(const AbstractClass& cls, int bound);

}  // namespace sil
