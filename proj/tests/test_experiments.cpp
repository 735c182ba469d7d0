#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <iterator>

#include "sil/catalog.hpp"
#include "sil/colimits.hpp"
#include "sil/experiments.hpp"
#include "sil/io.hpp"

using namespace sil;

namespace {

CheckBudget at(int bound) {
    CheckBudget b;
    b.bound = bound;
    return b;
}

std::vector<int> ints(const json& j) { return j.get<std::vector<int>>(); }

}  // namespace

TEST_CASE("differential comparison") {
    auto fin = make_class("finset");
    auto gra = make_class("graph");
    auto same = differential_compare(make_relation("pullback_rel", fin), make_relation("effective_pullback_rel", fin),
                                     *fin, at(3));
    CHECK(same.verdict == TriBool::Holds);
    CHECK(same.configurations > 0);

    auto diff = differential_compare(make_relation("pullback_rel", gra), make_relation("effective_pullback_rel", gra),
                                     *gra, at(3));
    REQUIRE(diff.verdict == TriBool::Fails);
    // Two vertices joined by an edge, the sides meeting in nothing.
    bool edge_amalgam = false;
    for (auto& w : diff.witnesses) {
        auto n = structure_from_json(w["N"]);
        edge_amalgam |= n.size() == 2 && n.rel2(0, 0, 1) && ints(w["M0"]).empty() && ints(w["M1"]).size() == 1 &&
                        ints(w["M2"]).size() == 1 && w["pullback_rel"] == true && w["effective_pullback_rel"] == false;
    }
    CHECK(edge_amalgam);

    auto cross = differential_compare(make_relation("no_cross_edges", gra), make_relation("all_cross_edges", gra), *gra,
                                      at(2));
    CHECK(cross.verdict == TriBool::Fails);

    // A relation against itself.
    auto self = differential_compare(make_relation("mixed_bad", gra), make_relation("mixed_bad", gra), *gra, at(3));
    CHECK(self.verdict == TriBool::Holds);
    CHECK(extensionally_equal(*make_relation("effective_pullback_rel", gra), *make_relation("no_cross_edges", gra),
                              *gra, 3));
    CHECK_FALSE(extensionally_equal(*make_relation("pullback_rel", gra), *make_relation("no_cross_edges", gra), *gra, 3));
}

TEST_CASE("coherent choices on finite sets") {
    auto fin = make_class("finset");
    CanonicityOptions o;
    auto r = canonicity_search(fin, o);
    CHECK(r.report.verdict == TriBool::Holds);
    REQUIRE(r.survivor_count == 1);
    CHECK(extensionally_equal(*r.survivors[0], *make_relation("intersection", fin), *fin, 3));
    // Past the bound a choice says nothing.
    Square big{make_set(4).get(), 0b0001, 0b0011, 0b0101, 0b1111};
    CHECK_FALSE(r.survivors[0]->decide(big));

    // Without filters every admissible choice survives, and the filters only remove.
    CanonicityOptions bare;
    bare.transitivity = bare.monotonicity = false;
    auto all = canonicity_search(fin, bare);
    CHECK(all.survivor_count == all.choices_before_filters);
    CHECK(all.survivor_count > 1);
}

TEST_CASE("coherent choices are checked by the independent transitivity sweep") {
    // Transitivity as clauses during the search versus the standalone checker.
    for (auto spec : {"finset", "graph", "klocal_graph:2"}) {
        CAPTURE(spec);
        auto cls = make_class(spec);
        CanonicityOptions bare;
        bare.transitivity = false;
        bare.monotonicity = true;
        bare.max_survivors = 10000;
        auto all = canonicity_search(cls, bare);
        CanonicityOptions full;
        auto kept = canonicity_search(cls, full);
        REQUIRE(all.survivors.size() == all.survivor_count);
        std::size_t transitive = 0;
        for (auto& s : all.survivors) {
            bool r = check_transitivity(s, *cls, at(3), Side::Right).verdict == TriBool::Holds;
            bool l = check_transitivity(s, *cls, at(3), Side::Left).verdict == TriBool::Holds;
            transitive += r && l;
        }
        CHECK(transitive == kept.survivor_count);
    }
}

TEST_CASE("coherent choices on graphs") {
    auto gra = make_class("graph");
    auto r = canonicity_search(gra, CanonicityOptions{});
    // Only relations from the transitive catalog survive.
    std::vector<RelPtr> known;
    for (auto n : {"no_cross_edges", "all_cross_edges", "mixed_bad"}) known.push_back(make_relation(n, gra));
    REQUIRE(r.survivor_count == r.survivors.size());
    std::size_t matched = 0;
    for (auto& s : r.survivors)
        for (auto& k : known) matched += extensionally_equal(*s, *k, *gra, 3);
    CHECK(matched == 3);
    CHECK(r.survivor_count >= 3);

    // Local character a+1 cannot fail below four vertices; at four it removes all.
    CanonicityOptions lc;
    lc.lambda = "a+1";
    CHECK(canonicity_search(gra, lc).survivor_count == r.survivor_count);
    lc.bound = 4;
    auto four = canonicity_search(gra, lc);
    CHECK(four.survivor_count == 0);
    CHECK(four.report.verdict == TriBool::Fails);
    CHECK(check_local_character(make_relation("no_cross_edges", gra), *gra, parse_lambda("a+1"), at(4)).verdict ==
          TriBool::Fails);
}

TEST_CASE("pullback consequence") {
    auto fin = make_class("finset");
    auto rep = verify_pullback_consequence(make_relation("intersection", fin), *fin, at(3));
    CHECK(rep.verdict == TriBool::Holds);
    CHECK_FALSE(rep.notes.empty());
    auto kl = make_class("klocal_graph:2");
    CHECK(verify_pullback_consequence(make_relation("no_cross_edges", kl), *kl, at(3)).verdict == TriBool::Holds);

    auto mod = make_class("module:2");
    auto bad = verify_pullback_consequence(make_relation("all_squares", mod), *mod, at(2));
    REQUIRE(bad.verdict == TriBool::Fails);
    auto w = bad.witnesses.front();
    std::vector<int> m1 = ints(w["M1"]), m2 = ints(w["M2"]), m0 = ints(w["M0"]), meet;
    std::set_intersection(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(meet));
    CHECK(meet != m0);
}

TEST_CASE("axiom suite") {
    auto fin = make_class("finset");
    SuiteOptions o;
    o.budget = at(3);
    o.theta = 2;
    o.lambda = "a";
    auto all = run_axiom_suite(make_relation("intersection", fin), fin, o);
    CHECK(all.reports.size() == default_axioms().size());
    CHECK(all.verdict() == TriBool::Holds);
    CHECK(verdict_of(all, "symmetry") == TriBool::Holds);
    CHECK_FALSE(verdict_of(all, "no-such-check"));

    auto gra = make_class("graph");
    SuiteOptions one;
    one.budget = at(3);
    one.axioms = {"uniqueness"};
    CHECK(run_axiom_suite(make_relation("pullback_rel", gra), gra, one).verdict() == TriBool::Fails);
    // mixed_bad needs a fourth vertex before transitivity breaks.
    one.axioms = {"transitivity-right"};
    CHECK(run_axiom_suite(make_relation("mixed_bad", gra), gra, one).verdict() == TriBool::Holds);
    one.budget = at(4);
    CHECK(run_axiom_suite(make_relation("mixed_bad", gra), gra, one).verdict() == TriBool::Fails);

    one.axioms = {"transitivity"};
    CHECK_THROWS_AS(run_axiom_suite(make_relation("mixed_bad", gra), gra, one), std::invalid_argument);
}

TEST_CASE("effective unions exactly when pullbacks are unique") {
    std::vector<std::pair<std::string, int>> cases{{"finset", 3},        {"graph", 2},      {"graph", 3},
                                                   {"multigraph", 2},    {"vecspace:2", 2}, {"module:4", 4},
                                                   {"klocal_graph:2", 3}};
    for (auto& [spec, bound] : cases) {
        CAPTURE(spec);
        CAPTURE(bound);
        auto cls = make_class(spec);
        if (!relation_compatible("pullback_rel", *cls)) continue;
        bool eu = check_effective_unions(*cls, bound).verdict == TriBool::Holds;
        bool un = check_uniqueness(make_relation("pullback_rel", cls), *cls, at(bound)).verdict == TriBool::Holds;
        CHECK(eu == un);
    }
}
