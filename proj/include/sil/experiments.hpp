#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sil/independence.hpp"

namespace sil {

// Every square (s0, s1, s2, s3) inside members within the bound on which the
// two relations disagree.
CheckReport differential_compare(const RelPtr& a, const RelPtr& b, const AbstractClass& cls,
                                 const CheckBudget& budget);

struct CanonicityOptions {
    int bound = 3;
    SearchBudget search;
    bool transitivity = true;   // both sides
    bool monotonicity = true;   // both sides
    std::optional<std::string> lambda;  // local-character filter, e.g. "a+1"
    std::size_t max_survivors = 64;     // further survivors are counted, not kept
};

// A coherent choice: one ~-class per span whose pushout fits in the bound.
// Squares of other spans, or beyond the bound, are dependent.
class ChoiceRelation : public Relation {
public:
    ChoiceRelation(std::shared_ptr<const Atlas> atlas, std::vector<int> frame, std::vector<int> choice,
                   std::string name);
    std::string name() const override { return name_; }
    bool decide(const Square& q) const override;
    const std::vector<int>& choice() const { return choice_; }

private:
    std::shared_ptr<const Atlas> atlas_;
    std::vector<int> choice_;  // per atlas span, -1 outside the frame
    std::string name_;
};

struct CanonicityResult {
    CheckReport report;  // statistics and inconclusive notes
    std::vector<RelPtr> survivors;
    std::size_t survivor_count = 0;
    std::size_t choices_before_filters = 0;  // product of admissible choices per span
    std::shared_ptr<const Atlas> atlas;
};

CanonicityResult canonicity_search(const ClassPtr& cls, const CanonicityOptions& options);

// Same decisions on every square within the bound.
bool extensionally_equal(const Relation& a, const Relation& b, const AbstractClass& cls, int bound);

// Every independent square within the bound is a pullback. Bases are all
// finite members, standing in for model-homogeneous ones.
CheckReport verify_pullback_consequence(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget);

struct SuiteOptions {
    CheckBudget budget;
    int theta = 3;
    std::string lambda = "a+2";
    // Empty: default_axioms().
    std::vector<std::string> axioms;
};

// closure, existence, uniqueness, transitivity-right, transitivity-left,
// monotonicity-right, monotonicity-left, base-monotonicity, symmetry,
// isomorphism-lemma, knf, witness, local-character.
const std::vector<std::string>& default_axioms();
// The defaults plus base-monotonicity-left, witness-left, local-character-left, nfbar-laws.
const std::vector<std::string>& all_axioms();

// Throws std::invalid_argument on an unknown axiom name.
ReportBundle run_axiom_suite(const RelPtr& rel, const ClassPtr& cls, const SuiteOptions& options);

// Verdict of one named report in a bundle (the report's own check name).
std::optional<TriBool> verdict_of(const ReportBundle& b, const std::string& check);

}  // namespace sil
