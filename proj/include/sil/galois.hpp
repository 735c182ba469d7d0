#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sil/diagrams.hpp"

namespace sil {

// A tuple of N over a base M embedded in N.
struct PointedExtension {
    StructPtr m;
    StructPtr n;
    std::vector<int> embed;  // M -> N
    std::vector<int> tuple;
};

struct BaseMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Isomorphism type of type_closure(base + tuple) with base elements marked by
// position in `base` and tuple entries by position. Decides Galois types in
// classes with types_complete().
std::string type_key(const AbstractClass& cls, const Structure& n, const std::vector<int>& base,
                     const std::vector<int>& tuple);

// Holds when some amalgam of the two extensions over M identifies the tuples
// (searched over generated parts, codomains up to the budget).
TriBool gtp_equal_search(const AbstractClass& cls, const PointedExtension& p, const PointedExtension& q,
                         const SearchBudget& budget = {});
// Certificate first when the class has one.
TriBool gtp_equal(const AbstractClass& cls, const PointedExtension& p, const PointedExtension& q,
                  const SearchBudget& budget = {});

struct TypeCount {
    std::int64_t count = 0;
    std::int64_t next = 0;  // count with the bound raised by one
    bool stable = true;
    TriBool verdict = TriBool::Holds;
    std::vector<std::string> notes;
};
// Types of alpha-tuples over m realized in strong extensions of measure <= bound
// (0: measure(m) + alpha). With `search`, types are merged by gtp_equal_search.
TypeCount count_types(const AbstractClass& cls, const StructPtr& m, int alpha, int bound = 0, bool search = false);

// Distinct types of alpha-tuples over m are told apart by a restriction to
// some A within m with |A| < chi. Extensions up to measure(m) + alpha.
CheckReport check_tameness(const AbstractClass& cls, const StructPtr& m, int alpha, int chi);
// Same over every member within the bound.
CheckReport check_tameness(const AbstractClass& cls, int alpha, int chi, int bound);

struct OrderWitness {
    StructPtr m;
    std::vector<std::vector<int>> sequence;
    bool uniform = false;  // every forward pair has one type
};
json to_json(const OrderWitness& w);

enum class OrderSearch { Uniform, Literal };
// Members up to size_bound carrying alpha-tuples a_0..a_{length-1} whose
// forward pair types (a_i a_j, i < j) never equal a backward one (a_j a_i).
// Uniform asks for one forward type throughout, the shape every long enough
// sequence contains; Literal takes the condition as stated at this length.
std::optional<OrderWitness> find_order_property(const AbstractClass& cls, int alpha, int length, int size_bound,
                                                OrderSearch mode = OrderSearch::Uniform);
// Re-checks a witness against the definition with type keys.
bool verify_order_witness(const AbstractClass& cls, const OrderWitness& w);

}  // namespace sil
