#include <bit>
#include <functional>

#include "sil/catalog.hpp"
#include "sil/colimits.hpp"

namespace sil {

namespace {

class DualRelation : public Relation {
public:
    explicit DualRelation(RelPtr r) : r_(std::move(r)) {}
    std::string name() const override { return r_->name() + "^d"; }
    bool decide(const Square& q) const override { return r_->decide(Square{q.n, q.s0, q.s2, q.s1, q.s3}); }
    bool has_direct() const override { return r_->has_direct(); }
    bool direct_nonfork(const Structure& n, Mask m0, Mask a, Mask b) const override {
        return r_->direct_nonfork(n, m0, b, a);
    }

private:
    RelPtr r_;
};

using Decider = std::function<bool(const Square&)>;

// A square predicate. With `direct` set, set-based nonforking is decided on
// the square (M0, cl(M0 A), cl(M0 B), N), which is right for relations that
// are monotone and insensitive to enlarging the codomain.
class BuiltinRelation : public Relation {
public:
    BuiltinRelation(std::string name, ClassPtr cls, Decider d, bool direct)
        : name_(std::move(name)), cls_(std::move(cls)), d_(std::move(d)), direct_(direct) {}
    std::string name() const override { return name_; }
    bool decide(const Square& q) const override { return d_(q); }
    bool has_direct() const override { return direct_; }
    bool direct_nonfork(const Structure& n, Mask m0, Mask a, Mask b) const override {
        return d_(Square{&n, m0, cls_->closure(n, m0 | a), cls_->closure(n, m0 | b), full_mask(n.size())});
    }

private:
    std::string name_;
    ClassPtr cls_;
    Decider d_;
    bool direct_;
};

bool meets_in_base(const Square& q) { return (q.s1 & q.s2) == q.s0; }

bool any_cross_edge(const Structure& n, int e, Mask x, Mask y) {
    for (int a : mask_elements(x))
        for (int b : mask_elements(y))
            if (n.rel2(e, a, b)) return true;
    return false;
}

bool all_cross_edges(const Structure& n, int e, Mask x, Mask y) {
    for (int a : mask_elements(x))
        for (int b : mask_elements(y))
            if (a != b && !n.rel2(e, a, b)) return false;
    return true;
}

bool has_binary_e(const AbstractClass& cls) {
    int e = cls.vocab()->relation_index("E");
    return e >= 0 && cls.vocab()->relations[e].second == 2;
}

const std::vector<std::string>& edge_relations() {
    static const std::vector<std::string> v{"no_cross_edges", "all_cross_edges", "mixed_bad", "iso_type_switch"};
    return v;
}

}  // namespace

RelPtr dual_relation(RelPtr r) { return std::make_shared<DualRelation>(std::move(r)); }

std::vector<std::string> relation_names() {
    return {"intersection", "no_cross_edges", "all_cross_edges", "mixed_bad", "iso_type_switch",
            "pullback_rel", "effective_pullback_rel", "all_squares", "empty", "even_codomain",
            "left_not_larger", "proper_intersection"};
}

bool relation_compatible(const std::string& name, const AbstractClass& cls) {
    for (auto& r : edge_relations())
        if (r == name) return has_binary_e(cls);
    if (name == "effective_pullback_rel") return cls.has_pushout() && cls.regular_registered();
    for (auto& r : relation_names())
        if (r == name) return true;
    return false;
}

RelPtr make_relation(const std::string& name, const ClassPtr& cls) {
    bool known = false;
    for (auto& r : relation_names()) known |= r == name;
    if (!known) throw UnknownName("unknown relation '" + name + "'");
    if (!relation_compatible(name, *cls))
        throw std::invalid_argument("relation '" + name + "' is not defined on class '" + cls->name() + "'");
    int e = cls->vocab()->relation_index("E");
    auto no_cross = [e](const Square& q) {
        return meets_in_base(q) && !any_cross_edge(*q.n, e, q.s1 & ~q.s0, q.s2 & ~q.s0);
    };
    auto all_cross = [e](const Square& q) {
        return meets_in_base(q) && all_cross_edges(*q.n, e, q.s1 & ~q.s0, q.s2 & ~q.s0);
    };
    Decider d;
    bool direct = false;
    if (name == "intersection") {
        d = meets_in_base;
        direct = true;
    } else if (name == "no_cross_edges") {
        d = no_cross;
        direct = true;
    } else if (name == "all_cross_edges") {
        d = all_cross;
        direct = true;
    } else if (name == "mixed_bad") {
        // Small bases forbid cross edges, larger ones demand all of them.
        d = [=](const Square& q) { return std::popcount(q.s0) < 2 ? no_cross(q) : all_cross(q); };
    } else if (name == "iso_type_switch") {
        d = [=](const Square& q) {
            bool edge = any_cross_edge(*q.n, e, q.s2, q.s2);
            return edge ? all_cross(q) : no_cross(q);
        };
    } else if (name == "pullback_rel") {
        d = [](const Square& q) { return is_pullback_square(q); };
        direct = true;
    } else if (name == "effective_pullback_rel") {
        ClassPtr c = cls;
        d = [c](const Square& q) { return is_effective_square(*c, q).verdict() == TriBool::Holds; };
        direct = true;
    } else if (name == "all_squares") {
        d = [](const Square&) { return true; };
        direct = true;
    } else if (name == "empty") {
        d = [](const Square&) { return false; };
        direct = true;
    } else if (name == "even_codomain") {
        d = [](const Square& q) { return std::popcount(q.s3) % 2 == 0; };
    } else if (name == "left_not_larger") {
        d = [](const Square& q) { return std::popcount(q.s1) <= std::popcount(q.s2); };
    } else {
        // proper_intersection: intersection minus the squares with a side equal to the base.
        d = [](const Square& q) { return meets_in_base(q) && q.s1 != q.s0 && q.s2 != q.s0; };
    }
    return std::make_shared<BuiltinRelation>(name, cls, std::move(d), direct);
}

}  // namespace sil
