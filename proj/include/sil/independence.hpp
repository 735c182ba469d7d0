#pragma once

#include <functional>
#include <string>

#include "sil/diagrams.hpp"

namespace sil {

enum class Side { Left, Right };
const char* to_string(Side s);

struct CheckBudget {
    int bound = 3;          // measure of the largest codomain swept
    SearchBudget search;    // equivalence searches
    int extension = 1;      // extra measure allowed when an existential search leaves N
};

// Strong embeddings N -> N' with measure(N') <= measure(N) + extra, one per
// isomorphism type of the pair (N', image).
struct Extension {
    StructPtr n;
    std::vector<int> map;
};
const std::vector<Extension>& strong_extensions(const AbstractClass& cls, const StructPtr& n, int extra);

// Sweeps over spans and their amalgams share one atlas when given.
CheckReport check_closure_under_equiv(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget,
                                      const Atlas* atlas = nullptr);
CheckReport check_existence(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);
CheckReport check_uniqueness(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget,
                             const Atlas* atlas = nullptr);
CheckReport check_transitivity(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget, Side side);
// Includes the descent form: an independent outer rectangle makes its left square independent.
CheckReport check_monotonicity(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget, Side side);
CheckReport check_base_monotonicity(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget,
                                    Side side = Side::Right);
CheckReport check_symmetry(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);
CheckReport check_isomorphism_lemma(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);
CheckReport check_knf_category(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);

// Set nonforking of A and B over the carrier m0 of n: some carriers M1 >= A m0
// and M2 >= B m0 of n or of a strong extension of n are independent over m0.
// FAILS means no such square within `extension`.
TriBool nfbar_search(const Relation& rel, const AbstractClass& cls, const StructPtr& n, Mask m0, Mask a, Mask b,
                     int extension = 1);
// Uses the relation's direct decider when it has one.
TriBool nfbar(const Relation& rel, const AbstractClass& cls, const StructPtr& n, Mask m0, Mask a, Mask b,
              int extension = 1);

// One report per law: preservation, monotonicity, normality, base-monotonicity,
// extension, symmetry, uniqueness, transitivity.
ReportBundle nfbar_laws(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);
CheckReport check_nfbar_laws(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);

// Every dependent square (M0, M1, M2, N) has A within M2, |A| < theta, with
// NF-bar(M0, M1, A, N) failing. Left runs the same on the dual.
CheckReport check_witness(const RelPtr& rel, const AbstractClass& cls, int theta, const CheckBudget& budget,
                          Side side = Side::Right);

// Affine bounds "c*a+d" in the variable a (also "a", "a+2", "3", "2a").
using LambdaFn = std::function<int(int)>;
LambdaFn parse_lambda(const std::string& text);

// For carriers M, N1 of every N, some carrier M0 of M with measure at most
// lambda(measure N1) has NF-bar(M0, N1, M, N).
CheckReport check_local_character(const RelPtr& rel, const AbstractClass& cls, const LambdaFn& lambda,
                                  const CheckBudget& budget, Side side = Side::Right);

}  // namespace sil
