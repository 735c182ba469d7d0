#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "sil/catalog.hpp"
#include "sil/diagrams.hpp"

using namespace sil;

namespace {

Span singleton_span(const StructPtr& point) {
    return Span{make_set(0), point, point, {}, {}};
}

Span graph_point_span() {
    auto p = make_graph(1, {});
    return Span{make_graph(0, {}), p, p, {}, {}};
}

// Oracle for amalgams: every labeled structure on up to `bound` elements
// that the class accepts, every pair of commuting embeddings, deduplicated by
// the colored form of (N, g1, g2) where colors record leg preimages.
std::size_t amalgam_oracle(const AbstractClass& cls, const Span& s, int bound,
                           const std::vector<StructPtr>& labeled, bool all) {
    std::set<std::string> keys;
    for (auto& n : labeled) {
        if (n->size() > bound || !cls.member(*n)) continue;
        for (auto& g1 : enumerate_embedding_maps(*s.m1, *n))
            for (auto& g2 : enumerate_embedding_maps(*s.m2, *n)) {
                Amalgam a{s, n, g1, g2};
                if (!commutes(a)) continue;
                if (!all && (image_mask(g1) | image_mask(g2)) != full_mask(n->size())) continue;
                std::vector<int> colors(n->size(), 0);
                for (std::size_t x = 0; x < g1.size(); ++x) colors[g1[x]] += 1 + static_cast<int>(x);
                for (std::size_t y = 0; y < g2.size(); ++y) colors[g2[y]] += 100 * (1 + static_cast<int>(y));
                keys.insert(canonical_key(*n, &colors));
            }
    }
    return keys.size();
}

std::vector<StructPtr> labeled_graphs_upto(int k) {
    std::vector<StructPtr> out;
    for (int n = 0; n <= k; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
        for (unsigned m = 0; m < (1u << slots.size()); ++m) {
            std::vector<std::pair<int, int>> e;
            for (std::size_t i = 0; i < slots.size(); ++i)
                if (m >> i & 1) e.push_back(slots[i]);
            out.push_back(make_graph(n, e));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("amalgams of two points") {
    auto fin = make_class("finset");
    auto am = enumerate_amalgams(*fin, singleton_span(make_set(1)), 2);
    REQUIRE(am.size() == 2);
    CHECK(am[0].n->size() == 1);
    CHECK(am[1].n->size() == 2);

    auto gra = make_class("graph");
    auto ga = enumerate_amalgams(*gra, graph_point_span(), 2);
    CHECK(ga.size() == 3);
    // Allowing a spare vertex next to the identified point adds two more.
    CHECK(enumerate_amalgams(*gra, graph_point_span(), 2, true).size() == 5);
    for (auto& a : ga) CHECK(valid_amalgam(*gra, a));
}

TEST_CASE("amalgam enumeration matches the labeled oracle") {
    auto gra = make_class("graph");
    auto labeled = labeled_graphs_upto(4);
    auto spans = enumerate_spans(*gra, 2);
    REQUIRE(!spans.empty());
    for (auto& s : spans) {
        for (int bound : {3, 4})
            for (bool all : {false, true}) {
                auto got = enumerate_amalgams(*gra, s, bound, all);
                CHECK(got.size() == amalgam_oracle(*gra, s, bound, labeled, all));
            }
    }
    auto k2 = make_class("klocal_graph:2");
    for (auto& s : enumerate_spans(*k2, 2))
        for (bool all : {false, true})
            CHECK(enumerate_amalgams(*k2, s, 4, all).size() == amalgam_oracle(*k2, s, 4, labeled, all));
}

TEST_CASE("span enumeration is complete up to isomorphism") {
    for (auto [spec, bound] : std::vector<std::pair<std::string, int>>{
             {"finset", 3}, {"graph", 3}, {"vecspace:2", 2}, {"multigraph", 2}}) {
        CAPTURE(spec);
        auto cls = make_class(spec);
        auto spans = enumerate_spans(*cls, bound);
        std::set<std::string> got;
        for (auto& s : spans) got.insert(span_key(s));
        CHECK(got.size() == spans.size());
        // Oracle: all pairs of embeddings between members, deduplicated by key.
        std::set<std::string> oracle;
        auto ms = cls->members(bound);
        for (auto& m0 : ms)
            for (auto& m1 : ms)
                for (auto& m2 : ms)
                    for (auto& f1 : enumerate_embedding_maps(*m0, *m1))
                        for (auto& f2 : enumerate_embedding_maps(*m0, *m2))
                            oracle.insert(span_key(Span{m0, m1, m2, f1, f2}));
        CHECK(got == oracle);
    }
}

TEST_CASE("equivalence of amalgams") {
    auto gra = make_class("graph");
    auto ga = enumerate_amalgams(*gra, graph_point_span(), 2);
    const Amalgam* edge = nullptr;
    const Amalgam* plain = nullptr;
    for (auto& a : ga)
        if (a.n->size() == 2) (a.n->rel2(0, 0, 1) ? edge : plain) = &a;
    REQUIRE(edge);
    REQUIRE(plain);
    CHECK(amalgams_equivalent(*gra, *edge, *edge).verdict == TriBool::Holds);
    for (int depth : {1, 2}) {
        SearchBudget b{4, depth};
        CHECK(amalgams_equivalent(*gra, *edge, *plain, b).verdict == TriBool::Fails);
        CHECK(amalgams_equivalent(*gra, *plain, *edge, b).verdict == TriBool::Fails);
    }

    // Two disjoint amalgams in sets differing by the fresh element's id.
    auto fin = make_class("finset");
    Span s = singleton_span(make_set(1));
    Amalgam a{s, make_set(3), {0}, {1}};
    Amalgam b{s, make_set(3), {2}, {0}};
    for (int depth : {1, 2}) {
        auto e = amalgams_equivalent(*fin, a, b, SearchBudget{0, depth});
        CHECK(e.verdict == TriBool::Holds);
    }
    Amalgam glued{s, make_set(1), {0}, {0}};
    CHECK(amalgams_equivalent(*fin, a, glued).verdict == TriBool::Fails);

    Span other = singleton_span(make_set(2));
    CHECK_THROWS_AS(amalgams_equivalent(*fin, a, Amalgam{other, make_set(2), {0, 1}, {0, 1}}), SpanMismatch);
}

TEST_CASE("depth-one search agrees with depth two in classes with amalgamation") {
    for (auto spec : {"finset", "graph"}) {
        auto cls = make_class(spec);
        for (auto& s : enumerate_spans(*cls, 2)) {
            auto am = enumerate_amalgams(*cls, s, 3, true);
            for (std::size_t i = 0; i < am.size(); ++i)
                for (std::size_t j = 0; j < am.size(); ++j) {
                    auto d1 = amalgams_equivalent(*cls, am[i], am[j], SearchBudget{0, 1});
                    auto d2 = amalgams_equivalent(*cls, am[i], am[j], SearchBudget{0, 2});
                    CHECK(d1.verdict == d2.verdict);
                    auto back = amalgams_equivalent(*cls, am[j], am[i], SearchBudget{0, 1});
                    CHECK(back.verdict == d1.verdict);
                }
        }
    }
}

TEST_CASE("equivalence is transitive within doubled budget") {
    auto gra = make_class("graph");
    for (auto& s : enumerate_spans(*gra, 2)) {
        auto am = enumerate_amalgams(*gra, s, 3, true);
        for (auto& x : am)
            for (auto& y : am)
                for (auto& z : am) {
                    SearchBudget b{0, 1};
                    if (amalgams_equivalent(*gra, x, y, b).verdict != TriBool::Holds) continue;
                    if (amalgams_equivalent(*gra, y, z, b).verdict != TriBool::Holds) continue;
                    CHECK(amalgams_equivalent(*gra, x, z, SearchBudget{8, 1}).verdict == TriBool::Holds);
                }
    }
}

TEST_CASE("dual diagrams") {
    auto gra = make_class("graph");
    for (auto& a : enumerate_amalgams(*gra, graph_point_span(), 2)) {
        Amalgam d = dual_diagram(dual_diagram(a));
        CHECK(same_span(d.span, a.span));
        CHECK(d.g1 == a.g1);
        CHECK(d.g2 == a.g2);
        Amalgam once = dual_diagram(a);
        CHECK(once.g1 == a.g2);
        CHECK(diagram_key(to_square(once)) == diagram_key(to_square(a)));  // symmetric span
    }
}

TEST_CASE("amalgam enumeration is invariant under renaming the span") {
    auto gra = make_class("graph");
    auto path = make_graph(3, {{0, 1}, {1, 2}});
    auto renamed = make_graph(3, {{2, 0}, {0, 1}});  // 0 is the middle vertex
    auto v = make_graph(1, {});
    Span s1{v, path, v, {1}, {0}};
    Span s2{v, renamed, v, {0}, {0}};
    auto a1 = enumerate_amalgams(*gra, s1, 4), a2 = enumerate_amalgams(*gra, s2, 4);
    CHECK(a1.size() == a2.size());
    std::multiset<std::string> k1, k2;
    for (auto& a : a1) k1.insert(diagram_key(to_square(a)));
    for (auto& a : a2) k2.insert(diagram_key(to_square(a)));
    CHECK(k1 == k2);
}

TEST_CASE("squares round-trip through inclusion form") {
    auto tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    Square q{tri.get(), 0b001, 0b011, 0b101, 0b111};
    Amalgam a = from_square(q);
    CHECK(commutes(a));
    Square back = to_square(a);
    CHECK(diagram_key(back) == diagram_key(q));
}

TEST_CASE("atlas classes on graphs") {
    auto gra = make_class("graph");
    Atlas atlas(*gra, 2);
    CHECK_FALSE(atlas.inconclusive());
    for (auto& e : atlas.spans()) {
        // Classes are exactly the isomorphism types of the generated parts.
        std::set<std::string> gen;
        for (auto& a : e.amalgams) gen.insert(generated_key(a));
        CHECK(static_cast<std::size_t>(e.components) == gen.size());
    }
    for (std::size_t i = 0; i < atlas.spans().size(); ++i)
        for (std::size_t k = 0; k < atlas.spans()[i].amalgams.size(); ++k) {
            auto hits = atlas.find_all(to_square(atlas.spans()[i].amalgams[k]));
            REQUIRE(hits);
            bool found = false;
            for (auto& h : *hits) found |= h == std::make_pair(static_cast<int>(i), static_cast<int>(k));
            CHECK(found);
        }
}
