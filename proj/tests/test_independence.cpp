#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>

#include "sil/catalog.hpp"
#include "sil/independence.hpp"

using namespace sil;

namespace {

CheckBudget at(int bound) {
    CheckBudget b;
    b.bound = bound;
    return b;
}

struct Pair {
    ClassPtr cls;
    RelPtr rel;
};

Pair pair(const std::string& cls, const std::string& rel) {
    auto c = make_class(cls);
    return {c, make_relation(rel, c)};
}

TriBool verdict(const CheckReport& r) { return r.verdict; }

bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

bool no_edge_between(const Structure& n, Mask x, Mask y) {
    for (int a : mask_elements(x))
        for (int b : mask_elements(y))
            if (n.rel2(0, a, b)) return false;
    return true;
}

}  // namespace

TEST_CASE("closure under equivalence") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_closure_under_equiv(inter, *fin, at(3))) == TriBool::Holds);
    auto even = check_closure_under_equiv(make_relation("even_codomain", fin), *fin, at(3));
    CHECK(even.verdict == TriBool::Fails);
    CHECK_FALSE(even.witnesses.empty());
    CHECK(verdict(check_closure_under_equiv(make_relation("all_squares", fin), *fin, at(3))) == TriBool::Holds);
}

TEST_CASE("existence") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_existence(inter, *fin, at(3))) == TriBool::Holds);
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_existence(nce, *gra, at(3))) == TriBool::Holds);
    auto none = check_existence(make_relation("empty", fin), *fin, at(1));
    CHECK(none.verdict == TriBool::Fails);
    CHECK(none.witnesses.size() == none.configurations);
}

TEST_CASE("uniqueness") {
    auto [gra, pb] = pair("graph", "pullback_rel");
    auto u = check_uniqueness(pb, *gra, at(3));
    CHECK(u.verdict == TriBool::Fails);
    // The smallest offending span is the two singletons over the empty graph.
    bool two_points = false;
    for (auto& w : u.witnesses) {
        auto& s = w["span"];
        two_points |= s["M0"]["universe"].empty() && s["M1"]["universe"].size() == 1 &&
                      s["M2"]["universe"].size() == 1;
    }
    CHECK(two_points);
    CHECK(verdict(check_uniqueness(make_relation("no_cross_edges", gra), *gra, at(3))) == TriBool::Holds);
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_uniqueness(inter, *fin, at(3))) == TriBool::Holds);
}

TEST_CASE("transitivity") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_transitivity(inter, *fin, at(3), Side::Right)) == TriBool::Holds);
    CHECK(verdict(check_transitivity(inter, *fin, at(3), Side::Left)) == TriBool::Holds);
    auto [gra, mixed] = pair("graph", "mixed_bad");
    // A composite needs a two-element middle base next to fresh vertices on both sides.
    CHECK(verdict(check_transitivity(mixed, *gra, at(3), Side::Right)) == TriBool::Holds);
    auto t = check_transitivity(mixed, *gra, at(4), Side::Right);
    CHECK(t.verdict == TriBool::Fails);
    CHECK_FALSE(t.witnesses.empty());
    CHECK(verdict(check_transitivity(make_relation("all_squares", gra), *gra, at(3), Side::Right)) ==
          TriBool::Holds);
}

TEST_CASE("monotonicity") {
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_monotonicity(nce, *gra, at(3), Side::Right)) == TriBool::Holds);
    CHECK(verdict(check_monotonicity(nce, *gra, at(3), Side::Left)) == TriBool::Holds);
    auto iso = check_monotonicity(make_relation("iso_type_switch", gra), *gra, at(3), Side::Right);
    CHECK(iso.verdict == TriBool::Fails);
    CHECK_FALSE(iso.witnesses.empty());
    CHECK(verdict(check_monotonicity(make_relation("all_squares", gra), *gra, at(3), Side::Right)) ==
          TriBool::Holds);
}

TEST_CASE("base monotonicity") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_base_monotonicity(inter, *fin, at(3))) == TriBool::Holds);
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_base_monotonicity(nce, *gra, at(3))) == TriBool::Holds);
    auto empty = check_base_monotonicity(make_relation("empty", fin), *fin, at(3));
    CHECK(empty.verdict == TriBool::Holds);
    CHECK(empty.configurations == 0);
}

TEST_CASE("symmetry and the isomorphism lemma") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_symmetry(inter, *fin, at(3))) == TriBool::Holds);
    CHECK(verdict(check_symmetry(make_relation("left_not_larger", fin), *fin, at(3))) == TriBool::Fails);
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_symmetry(nce, *gra, at(3))) == TriBool::Holds);

    CHECK(verdict(check_isomorphism_lemma(inter, *fin, at(3))) == TriBool::Holds);
    CHECK(verdict(check_isomorphism_lemma(nce, *gra, at(3))) == TriBool::Holds);
    auto bad = check_isomorphism_lemma(make_relation("proper_intersection", fin), *fin, at(2));
    CHECK(bad.verdict == TriBool::Fails);
    CHECK_FALSE(bad.witnesses.empty());
}

TEST_CASE("K_NF composition") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_knf_category(inter, *fin, at(3))) == TriBool::Holds);
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_knf_category(nce, *gra, at(3))) == TriBool::Holds);
    CHECK(verdict(check_knf_category(make_relation("mixed_bad", gra), *gra, at(4))) == TriBool::Fails);
}

TEST_CASE("NF-bar against set oracles") {
    auto [fin, inter] = pair("finset", "intersection");
    for (auto& n : fin->members(3)) {
        Mask full = full_mask(n->size());
        for (Mask m0 = 0; m0 <= full; ++m0)
            for (Mask a = 0; a <= full; ++a)
                for (Mask b = 0; b <= full; ++b) {
                    TriBool want = tri(((a & b) & ~m0) == 0);
                    CHECK(nfbar_search(*inter, *fin, n, m0, a, b) == want);
                    CHECK(nfbar(*inter, *fin, n, m0, a, b) == want);
                }
    }
    auto [gra, nce] = pair("graph", "no_cross_edges");
    for (auto& n : gra->members(3)) {
        Mask full = full_mask(n->size());
        for (Mask m0 = 0; m0 <= full; ++m0)
            for (Mask a = 0; a <= full; ++a)
                for (Mask b = 0; b <= full; ++b) {
                    bool want = ((a & b) & ~m0) == 0 && no_edge_between(*n, a & ~m0, b & ~m0);
                    CHECK(nfbar_search(*nce, *gra, n, m0, a, b) == tri(want));
                    if (subset_of(a, m0) || subset_of(b, m0)) CHECK(want);
                }
    }
}

TEST_CASE("direct deciders agree with the searched NF-bar") {
    for (auto [cls, rel, bound] : std::vector<std::tuple<std::string, std::string, int>>{
             {"finset", "intersection", 3},
             {"graph", "no_cross_edges", 3},
             {"graph", "all_cross_edges", 3},
             {"graph", "pullback_rel", 3},
             {"klocal_graph:2", "no_cross_edges", 3},
             {"vecspace:2", "intersection", 2},
             {"finset", "effective_pullback_rel", 3}}) {
        CAPTURE(cls);
        CAPTURE(rel);
        auto [c, r] = pair(cls, rel);
        REQUIRE(r->has_direct());
        std::size_t disagreements = 0, decided = 0;
        for (auto& n : c->members(bound)) {
            Mask full = full_mask(n->size());
            for (Mask m0 : c->carriers(n))
                for (Mask a = 0; a <= full; ++a)
                    for (Mask b = 0; b <= full; ++b) {
                        TriBool s = nfbar_search(*r, *c, n, m0, a, b);
                        if (s == TriBool::Inconclusive) continue;
                        ++decided;
                        disagreements += s != tri(r->direct_nonfork(*n, m0, a, b));
                    }
        }
        CHECK(decided > 0);
        CHECK(disagreements == 0);
    }
}

TEST_CASE("NF-bar on full sides is the relation") {
    for (auto [cls, rel, bound] : std::vector<std::tuple<std::string, std::string, int>>{
             {"finset", "intersection", 3},
             {"graph", "no_cross_edges", 3},
             {"graph", "mixed_bad", 3},
             {"klocal_graph:2", "no_cross_edges", 3},
             {"vecspace:2", "intersection", 2}}) {
        CAPTURE(cls);
        CAPTURE(rel);
        auto [c, r] = pair(cls, rel);
        for (auto& n : c->members(bound)) {
            const auto& cs = c->carriers(n);
            Mask full = full_mask(n->size());
            for (Mask m0 : cs)
                for (Mask m1 : cs)
                    for (Mask m2 : cs) {
                        if (!subset_of(m0, m1) || !subset_of(m0, m2)) continue;
                        bool d = r->decide(Square{n.get(), m0, m1, m2, full});
                        TriBool s = nfbar_search(*r, *c, n, m0, m1, m2);
                        if (s != TriBool::Inconclusive) CHECK(s == tri(d));
                    }
        }
    }
}

TEST_CASE("NF-bar laws") {
    auto [fin, inter] = pair("finset", "intersection");
    auto laws = nfbar_laws(inter, *fin, at(3));
    CHECK(laws.reports.size() == 8);
    for (auto& r : laws.reports) {
        CAPTURE(r.check);
        CHECK(r.verdict == TriBool::Holds);
    }
    // Degree below 2 leaves no room to extend the type of a neighbour of the
    // base freely: only the extension law breaks, on two edges at one vertex.
    auto [kl, nce] = pair("klocal_graph:2", "no_cross_edges");
    for (auto& r : nfbar_laws(nce, *kl, at(3)).reports) {
        CAPTURE(r.check);
        if (r.check != "extension") {
            CHECK(r.verdict == TriBool::Holds);
            continue;
        }
        CHECK(r.verdict == TriBool::Fails);
        REQUIRE_FALSE(r.witnesses.empty());
        auto& s = r.witnesses[0]["span"];
        CHECK(s["M0"]["universe"].size() == 1);
        CHECK(s["M1"]["relations"]["E"].size() == 2);
        CHECK(s["M2"]["relations"]["E"].size() == 2);
    }

    auto [gra, mixed] = pair("graph", "mixed_bad");
    CHECK(nfbar_laws(mixed, *gra, at(3)).verdict() == TriBool::Holds);
    auto bad = nfbar_laws(mixed, *gra, at(4));
    bool transitivity_failed = false;
    for (auto& r : bad.reports)
        if (r.check == "transitivity") transitivity_failed = r.verdict == TriBool::Fails && !r.witnesses.empty();
    CHECK(transitivity_failed);
}

TEST_CASE("witness property") {
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_witness(nce, *gra, 3, at(3))) == TriBool::Holds);
    CHECK(verdict(check_witness(nce, *gra, 2, at(3))) == TriBool::Holds);
    // The empty set never forks, so nothing is witnessed.
    CHECK(verdict(check_witness(nce, *gra, 1, at(3))) == TriBool::Fails);
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_witness(inter, *fin, 2, at(3))) == TriBool::Holds);
    auto [kl, knce] = pair("klocal_graph:2", "no_cross_edges");
    CHECK(verdict(check_witness(knce, *kl, 3, at(3), Side::Left)) == TriBool::Holds);
}

TEST_CASE("lambda parsing") {
    CHECK(parse_lambda("a")(4) == 4);
    CHECK(parse_lambda("a+2")(1) == 3);
    CHECK(parse_lambda("2*a+1")(3) == 7);
    CHECK(parse_lambda("a*3")(2) == 6);
    CHECK(parse_lambda("2a")(5) == 10);
    CHECK(parse_lambda("3")(100) == 3);
    CHECK(parse_lambda("a-5")(1) == 0);
    CHECK_THROWS_AS(parse_lambda("b+1"), std::invalid_argument);
}

TEST_CASE("local character") {
    auto [fin, inter] = pair("finset", "intersection");
    CHECK(verdict(check_local_character(inter, *fin, parse_lambda("a"), at(3))) == TriBool::Holds);
    CHECK(verdict(check_local_character(make_relation("all_squares", fin), *fin, parse_lambda("0"), at(3))) ==
          TriBool::Holds);
    // Degree at most 2 within three vertices.
    auto [gra, nce] = pair("graph", "no_cross_edges");
    CHECK(verdict(check_local_character(nce, *gra, parse_lambda("2a"), at(3))) == TriBool::Holds);
    // The empty base cannot absorb a shared vertex.
    CHECK(verdict(check_local_character(inter, *fin, parse_lambda("0"), at(2))) == TriBool::Fails);
}

TEST_CASE("left checkers are right checkers on the dual") {
    auto gra = make_class("graph");
    for (auto name : {"no_cross_edges", "mixed_bad", "iso_type_switch", "left_not_larger"}) {
        CAPTURE(name);
        auto r = make_relation(name, gra);
        auto d = dual_relation(r);
        auto same = [](CheckReport a, CheckReport b) {
            a.wall_ms = b.wall_ms = 0;
            a.check = b.check;
            return a == b;
        };
        CHECK(same(check_transitivity(r, *gra, at(3), Side::Left), check_transitivity(d, *gra, at(3), Side::Right)));
        CHECK(same(check_monotonicity(r, *gra, at(3), Side::Left), check_monotonicity(d, *gra, at(3), Side::Right)));
        CHECK(same(check_witness(r, *gra, 3, at(3), Side::Left), check_witness(d, *gra, 3, at(3), Side::Right)));
    }
}

TEST_CASE("existence, uniqueness and transitivity bring the derived lemmas") {
    for (auto [cls, bound] : std::vector<std::pair<std::string, int>>{
             {"finset", 3}, {"graph", 3}, {"klocal_graph:2", 3}, {"vecspace:2", 2}}) {
        auto c = make_class(cls);
        Atlas atlas(*c, bound);
        for (auto& name : relation_names()) {
            if (!relation_compatible(name, *c)) continue;
            CAPTURE(cls);
            CAPTURE(name);
            auto r = make_relation(name, c);
            bool base = check_existence(r, *c, at(bound)).verdict == TriBool::Holds &&
                        check_uniqueness(r, *c, at(bound), &atlas).verdict == TriBool::Holds &&
                        check_transitivity(r, *c, at(bound), Side::Right).verdict == TriBool::Holds;
            if (!base) continue;
            CHECK(check_monotonicity(r, *c, at(bound), Side::Right).verdict == TriBool::Holds);
            CHECK(check_base_monotonicity(r, *c, at(bound)).verdict == TriBool::Holds);
            CHECK(check_isomorphism_lemma(r, *c, at(bound)).verdict == TriBool::Holds);
        }
    }
}

TEST_CASE("strong extensions") {
    auto gra = make_class("graph");
    auto v = gra->members(1)[1];
    // A second vertex, adjacent or not.
    CHECK(strong_extensions(*gra, v, 1).size() == 2);
    // Over a vertex: 2 two-vertex and 6 three-vertex configurations up to isomorphism fixing it.
    CHECK(strong_extensions(*gra, v, 2).size() == 2 + 6);
    auto fin = make_class("finset");
    CHECK(strong_extensions(*fin, fin->members(2)[2], 2).size() == 2);
    CHECK(strong_extensions(*fin, fin->members(2)[2], 0).empty());
}
