#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sil {

using Mask = std::uint64_t;

struct Vocabulary {
    std::vector<std::pair<std::string, int>> relations;
    std::vector<std::pair<std::string, int>> functions;

    int relation_index(const std::string& name) const;
    int function_index(const std::string& name) const;
    bool relational() const { return functions.empty(); }
    bool operator==(const Vocabulary& o) const {
        return relations == o.relations && functions == o.functions;
    }
};

using VocabPtr = std::shared_ptr<const Vocabulary>;

// Throws std::invalid_argument on duplicate names or bad arities.
VocabPtr make_vocabulary(std::vector<std::pair<std::string, int>> relations,
                         std::vector<std::pair<std::string, int>> functions);

struct VocabularyMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

// Elements are 0..n-1 internally; `labels` keeps the ids a file used.
class Structure {
public:
    Structure(VocabPtr vocab, int n);

    int size() const { return n_; }
    const Vocabulary& vocab() const { return *vocab_; }
    const VocabPtr& vocab_ptr() const { return vocab_; }

    std::size_t tuple_index(const int* t, int arity) const;
    bool rel(int r, const int* t) const { return rels_[r][tuple_index(t, arity_r(r))] != 0; }
    bool rel2(int r, int a, int b) const { return rels_[r][a + static_cast<std::size_t>(n_) * b] != 0; }
    void set_rel(int r, const int* t, bool v) { rels_[r][tuple_index(t, arity_r(r))] = v ? 1 : 0; }
    void set_rel2(int r, int a, int b, bool v) { rels_[r][a + static_cast<std::size_t>(n_) * b] = v ? 1 : 0; }

    int fn(int f, const int* args) const { return fns_[f][tuple_index(args, arity_f(f))]; }
    void set_fn(int f, const int* args, int v) { fns_[f][tuple_index(args, arity_f(f))] = v; }

    int arity_r(int r) const { return vocab_->relations[r].second; }
    int arity_f(int f) const { return vocab_->functions[f].second; }

    const std::vector<std::uint8_t>& rel_table(int r) const { return rels_[r]; }
    const std::vector<int>& fn_table(int f) const { return fns_[f]; }
    std::vector<std::uint8_t>& rel_table(int r) { return rels_[r]; }
    std::vector<int>& fn_table(int f) { return fns_[f]; }

    std::vector<std::vector<int>> tuples(int r) const;

    const std::vector<int>& labels() const { return labels_; }
    void set_labels(std::vector<int> l) { labels_ = std::move(l); }

    // Throws std::invalid_argument describing the first violated invariant.
    void validate() const;

    bool operator==(const Structure& o) const;

private:
    VocabPtr vocab_;
    int n_;
    std::vector<std::vector<std::uint8_t>> rels_;
    std::vector<std::vector<int>> fns_;
    std::vector<int> labels_;
};

using StructPtr = std::shared_ptr<const Structure>;

// Calls fn on every tuple of {0..n-1}^arity in index order.
void for_each_tuple(int n, int arity, const std::function<void(const int*)>& fn);

struct Embedding {
    StructPtr source;
    StructPtr target;
    std::vector<int> map;
};

Embedding identity_embedding(const StructPtr& m);
Embedding compose(const Embedding& g, const Embedding& f);  // g after f
bool same_arrow(const Embedding& a, const Embedding& b);

bool is_embedding(const Structure& src, const Structure& tgt, const std::vector<int>& map);
bool is_embedding(const Embedding& e);
bool is_homomorphism(const Structure& src, const Structure& tgt, const std::vector<int>& map);

// Backtracking search with function-value propagation. `pre` may fix some
// images (-1 = free). The callback returns false to stop early.
void for_each_embedding(const Structure& m, const Structure& n, const std::vector<int>& pre,
                        const std::function<bool(const std::vector<int>&)>& cb);

std::vector<std::vector<int>> enumerate_embedding_maps(const Structure& m, const Structure& n);
std::vector<Embedding> enumerate_embeddings(const StructPtr& m, const StructPtr& n);
std::optional<std::vector<int>> first_embedding(const Structure& m, const Structure& n,
                                                const std::vector<int>& pre);
std::optional<Embedding> are_isomorphic(const StructPtr& m, const StructPtr& n);
std::vector<std::vector<int>> automorphisms(const Structure& m);

// Canonical labeling by refinement and individualization. `colors` optionally
// assigns an initial color to each element. Equal forms iff isomorphic
// (respecting colors).
std::vector<int> canonical_form(const Structure& m, const std::vector<int>* colors = nullptr);
std::string canonical_key(const Structure& m, const std::vector<int>* colors = nullptr);

Mask full_mask(int n);
std::vector<int> mask_elements(Mask m);
Mask image_mask(const std::vector<int>& map);

// Substructure on the listed elements (in the given order). Function values
// must stay inside; throws std::invalid_argument otherwise.
Structure induced(const Structure& m, const std::vector<int>& elems);
Structure induced(const Structure& m, Mask elems);
bool closed_under_functions(const Structure& m, Mask elems);
Mask generated(const Structure& m, Mask elems);
std::vector<Mask> closed_subsets(const Structure& m);

}  // namespace sil
