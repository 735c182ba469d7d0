#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sil/abstract_class.hpp"
#include "sil/relation.hpp"

namespace sil {

struct UnknownName : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// finset, graph, multigraph, klocal_graph:K, vecspace:P, module:N, or
// user:<directory> (structure files). `strong_mode` applies to user classes:
// "induced" or "all".
ClassPtr make_class(const std::string& spec, const std::string& strong_mode = "induced");

// Throws UnknownName or std::invalid_argument when the class cannot host it.
RelPtr make_relation(const std::string& name, const ClassPtr& cls);

std::vector<std::string> relation_names();
std::vector<std::string> builtin_class_names();
bool relation_compatible(const std::string& name, const AbstractClass& cls);

// Handy constructors for tests and examples.
VocabPtr graph_vocabulary();
StructPtr make_graph(int n, const std::vector<std::pair<int, int>>& edges);
VocabPtr set_vocabulary();
StructPtr make_set(int n);

// Degree of vertex v in a graph structure.
int degree(const Structure& g, int v);

// The elementary abelian group of order p^d, or a product of cyclic groups.
StructPtr make_abelian(const std::vector<int>& factors);
VocabPtr abelian_vocabulary();

// Glued union of a span whose vocabulary has functions of arity <= 1 only.
Pushout glued_union(const Structure& m0, const Structure& m1, const Structure& m2, const std::vector<int>& f1,
                    const std::vector<int>& f2);

}  // namespace sil
