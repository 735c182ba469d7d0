#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <set>

#include "sil/catalog.hpp"
#include "sil/colimits.hpp"

using namespace sil;

namespace {

// All maps P -> N (brute force) that are homomorphisms commuting with legs.
std::size_t mediator_count(const Amalgam& cocone, const Amalgam& comp) {
    int p = cocone.n->size(), n = comp.n->size();
    std::vector<int> u(p, 0);
    std::size_t count = 0;
    std::function<void(int)> rec = [&](int i) {
        if (i == p) {
            for (std::size_t x = 0; x < comp.g1.size(); ++x)
                if (u[cocone.g1[x]] != comp.g1[x]) return;
            for (std::size_t y = 0; y < comp.g2.size(); ++y)
                if (u[cocone.g2[y]] != comp.g2[y]) return;
            if (is_homomorphism(*cocone.n, *comp.n, u)) ++count;
            return;
        }
        for (int v = 0; v < n; ++v) {
            u[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return count;
}

Span point_span_graph() {
    auto p = make_graph(1, {});
    return Span{make_graph(0, {}), p, p, {}, {}};
}

}  // namespace

TEST_CASE("pushouts") {
    auto fin = make_class("finset");
    auto p = make_set(1);
    auto po = pushout(*fin, Span{make_set(0), p, p, {}, {}});
    CHECK(po.cocone.n->size() == 2);
    CHECK(po.cocone.g1 != po.cocone.g2);

    auto gra = make_class("graph");
    auto gp = pushout(*gra, point_span_graph());
    CHECK(gp.cocone.n->size() == 2);
    CHECK_FALSE(gp.cocone.n->rel2(0, 0, 1));

    auto vec = make_class("vecspace:2");
    auto plane = make_abelian({2, 2});
    auto vp = pushout(*vec, Span{make_abelian({2}), plane, plane, {0, 1}, {0, 1}});
    CHECK(vec->measure(*vp.cocone.n) == 3);
}

TEST_CASE("pullbacks") {
    auto edge = make_graph(2, {{0, 1}});
    auto v = make_graph(1, {});
    auto pb = pullback(*edge, v, {0}, v, {1});
    CHECK(pb.span.m0->size() == 0);
    auto same = pullback(*edge, edge, {0, 1}, edge, {0, 1});
    CHECK(same.span.m0->size() == 2);
    CHECK(*same.span.m0 == *edge);

    // Two distinct lines in F_2^2 meet in the zero space.
    auto plane = make_abelian({2, 2});
    auto line = make_abelian({2});
    auto lines = pullback(*plane, line, {0, 1}, line, {0, 2});
    CHECK(lines.span.m0->size() == 1);
}

TEST_CASE("regular monos") {
    auto gra = make_class("graph");
    auto edge = make_graph(2, {{0, 1}});
    auto two = make_graph(2, {});
    CHECK(is_regular_mono(*gra, *two, *edge, {0, 1}) == TriBool::Fails);
    auto tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(is_regular_mono(*gra, *make_graph(1, {}), *tri, {2}) == TriBool::Holds);
    auto fin = make_class("finset");
    CHECK(is_regular_mono(*fin, *make_set(2), *make_set(3), {2, 0}) == TriBool::Holds);
    CHECK(is_regular_mono(*fin, *make_set(2), *make_set(3), {1, 1}) == TriBool::Fails);
}

TEST_CASE("pullback squares and effective squares") {
    auto fin = make_class("finset");
    auto p = make_set(1);
    Span s{make_set(0), p, p, {}, {}};
    Amalgam disjoint{s, make_set(2), {0}, {1}};
    Amalgam glued{s, make_set(1), {0}, {0}};
    CHECK(is_pullback_square(disjoint));
    CHECK_FALSE(is_pullback_square(glued));
    CHECK(is_effective_square(*fin, disjoint).verdict() == TriBool::Holds);
    CHECK(is_effective_square(*fin, glued).verdict() == TriBool::Fails);

    auto gra = make_class("graph");
    auto gs = point_span_graph();
    Amalgam edge{gs, make_graph(2, {{0, 1}}), {0}, {1}};
    Amalgam plain{gs, make_graph(2, {}), {0}, {1}};
    CHECK(is_pullback_square(edge));
    auto v = is_effective_square(*gra, edge);
    CHECK(v.is_pullback);
    CHECK(v.induced_map_regular == TriBool::Fails);
    CHECK(v.witness.has_value());
    CHECK(is_effective_square(*gra, plain).verdict() == TriBool::Holds);
}

TEST_CASE("pushout universal property on graphs and sets") {
    for (auto spec : {"finset", "graph", "multigraph"}) {
        CAPTURE(spec);
        auto cls = make_class(spec);
        for (auto& s : enumerate_spans(*cls, 2)) {
            auto po = pushout(*cls, s);
            CHECK(commutes(po.cocone));
            for (auto& a : enumerate_amalgams(*cls, s, 3, true)) {
                auto u = po.mediator(a);
                REQUIRE(u);
                CHECK(mediator_count(po.cocone, a) == 1);
            }
        }
    }
}

TEST_CASE("pushout squares are pullbacks") {
    for (auto [spec, bound] : std::vector<std::pair<std::string, int>>{
             {"finset", 4}, {"graph", 3}, {"multigraph", 3}, {"vecspace:2", 2}, {"module:4", 4}}) {
        CAPTURE(spec);
        auto cls = make_class(spec);
        for (auto& s : enumerate_spans(*cls, bound)) CHECK(is_pullback_square(pushout(*cls, s).cocone));
    }
}

TEST_CASE("ringel sweeps") {
    for (auto [spec, bound] : std::vector<std::pair<std::string, int>>{
             {"finset", 3}, {"graph", 3}, {"vecspace:2", 2}, {"multigraph", 2}}) {
        CAPTURE(spec);
        auto r = verify_ringel(*make_class(spec), bound);
        CHECK(r.verdict == TriBool::Holds);
        CHECK(r.configurations > 0);
    }
}

TEST_CASE("effective unions") {
    auto g = check_effective_unions(*make_class("graph"), 2);
    CHECK(g.verdict == TriBool::Fails);
    REQUIRE(g.witnesses.size() == 1);
    CHECK(g.witnesses[0]["M0"].empty());
    CHECK(g.witnesses[0]["M1"].size() == 1);
    CHECK(g.witnesses[0]["M2"].size() == 1);
    CHECK(check_effective_unions(*make_class("finset"), 3).verdict == TriBool::Holds);
    CHECK(check_effective_unions(*make_class("multigraph"), 2).verdict == TriBool::Holds);
    CHECK(check_effective_unions(*make_class("vecspace:2"), 2).verdict == TriBool::Holds);
}

TEST_CASE("effective implies pullback, and effective squares compose") {
    for (auto spec : {"finset", "graph"}) {
        CAPTURE(spec);
        auto cls = make_class(spec);
        for (auto& n : cls->members(3)) {
            const auto& cs = cls->carriers(n);
            Mask full = full_mask(n->size());
            auto eff = [&](Mask a, Mask b, Mask c, Mask d) {
                return is_effective_square(*cls, Square{n.get(), a, b, c, d}).verdict() == TriBool::Holds;
            };
            for (Mask s0 : cs)
                for (Mask s1 : cs)
                    for (Mask s2 : cs) {
                        if ((s0 & ~s1) || (s0 & ~s2)) continue;
                        if (eff(s0, s1, s2, full)) CHECK(is_pullback_square(Square{n.get(), s0, s1, s2, full}));
                        for (Mask s3 : cs) {
                            if (((s1 | s2) & ~s3)) continue;
                            for (Mask s4 : cs) {
                                if (s2 & ~s4) continue;
                                // Horizontal composite of (s0,s1,s2,s3) and (s2,s3,s4,N).
                                if (eff(s0, s1, s2, s3) && eff(s2, s3, s4, full)) CHECK(eff(s0, s1, s4, full));
                            }
                        }
                    }
        }
    }
}

TEST_CASE("classes without pushouts") {
    auto user = make_class("user:" SIL_TEST_DATA "/user_graphs");
    auto p = user->members(1);
    REQUIRE(p.size() == 2);
    Span s{p[0], p[1], p[1], {}, {}};
    CHECK_THROWS_AS(pushout(*user, s), UnsupportedOperation);
    CHECK(verify_ringel(*user, 2).verdict == TriBool::Inconclusive);
    CHECK(is_regular_mono(*user, *p[1], *p[1], {0}) == TriBool::Inconclusive);
}
