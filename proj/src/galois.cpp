#include "sil/galois.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "sil/io.hpp"
#include "sil/parallel.hpp"

namespace sil {

namespace {

Mask elements_mask(const std::vector<int>& xs) {
    Mask m = 0;
    for (int x : xs) m |= Mask{1} << x;
    return m;
}

// Colors: base position + 1 in the high bits, tuple positions as low bits.
std::vector<int> type_colors(const std::vector<int>& elems, const std::vector<int>& base,
                             const std::vector<int>& tuple) {
    std::size_t len = tuple.size();
    std::vector<int> colors;
    colors.reserve(elems.size());
    for (int x : elems) {
        int c = 0;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (base[i] == x) c = static_cast<int>(i + 1) << len;
        for (std::size_t p = 0; p < len; ++p)
            if (tuple[p] == x) c |= 1 << p;
        colors.push_back(c);
    }
    return colors;
}

void all_tuples(int n, int len, std::vector<std::vector<int>>& out) {
    std::vector<int> t(len, 0);
    if (len == 0) {
        out.push_back(t);
        return;
    }
    if (n == 0) return;
    for (;;) {
        out.push_back(t);
        int i = len - 1;
        while (i >= 0 && ++t[i] == n) t[i--] = 0;
        if (i < 0) return;
    }
}

// Quantifier-free type of a tuple: equalities and every relation on
// positions. Decides the type over the empty base when the tuple's entries
// are already closed.
std::string qf_signature(const Structure& n, const std::vector<int>& t) {
    int k = static_cast<int>(t.size());
    std::string sig = "q";
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) sig.push_back(t[i] == t[j] ? '1' : '0');
    std::vector<int> args;
    for (int r = 0; r < static_cast<int>(n.vocab().relations.size()); ++r) {
        int ar = n.arity_r(r);
        args.assign(ar, 0);
        for_each_tuple(k, ar, [&](const int* pos) {
            for (int i = 0; i < ar; ++i) args[i] = t[pos[i]];
            sig.push_back(n.rel(r, args.data()) ? '1' : '0');
        });
    }
    return sig;
}

std::string tuple_type(const AbstractClass& cls, const Structure& n, const std::vector<int>& t) {
    Mask s = elements_mask(t);
    if (n.vocab().relational() && cls.type_closure(n, s) == s) return qf_signature(n, t);
    return type_key(cls, n, {}, t);
}

PointedExtension restrict_to_generated(const AbstractClass& cls, const PointedExtension& p) {
    Mask c = cls.type_closure(*p.n, elements_mask(p.embed) | elements_mask(p.tuple));
    auto elems = mask_elements(c);
    std::vector<int> pos(p.n->size(), -1);
    for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
    PointedExtension r{p.m, std::make_shared<Structure>(induced(*p.n, c)), {}, {}};
    for (int x : p.embed) r.embed.push_back(pos[x]);
    for (int x : p.tuple) r.tuple.push_back(pos[x]);
    return r;
}

struct Realization {
    StructPtr n;
    std::vector<int> embed;
    std::vector<int> tuple;
};

// One realization per type key, in discovery order.
std::vector<std::pair<std::string, std::vector<Realization>>> realized_types(const AbstractClass& cls,
                                                                             const StructPtr& m, int alpha,
                                                                             int bound, std::size_t samples) {
    bool skip_ungenerated = cls.hereditary() && cls.types_complete();
    std::vector<std::pair<std::string, std::vector<Realization>>> out;
    std::map<std::string, std::size_t> index;
    for (auto& n : cls.members(bound)) {
        if (n->size() < m->size()) continue;
        std::vector<std::vector<int>> tuples;
        all_tuples(n->size(), alpha, tuples);
        Mask full = full_mask(n->size());
        for_each_embedding(*m, *n, {}, [&](const std::vector<int>& e) {
            if (!cls.strong(*m, *n, e)) return true;
            Mask base = elements_mask(e);
            for (auto& t : tuples) {
                if (skip_ungenerated && cls.type_closure(*n, base | elements_mask(t)) != full) continue;
                auto key = type_key(cls, *n, e, t);
                auto [it, fresh] = index.emplace(key, out.size());
                if (fresh) out.push_back({key, {}});
                auto& reps = out[it->second].second;
                if (reps.size() < samples) reps.push_back(Realization{n, e, t});
            }
            return true;
        });
    }
    return out;
}

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    int find(int x) { return up[x] == x ? x : up[x] = find(up[x]); }
    bool join(int a, int b) {
        a = find(a), b = find(b);
        if (a == b) return false;
        up[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace

std::string type_key(const AbstractClass& cls, const Structure& n, const std::vector<int>& base,
                     const std::vector<int>& tuple) {
    Mask c = cls.type_closure(n, elements_mask(base) | elements_mask(tuple));
    auto elems = mask_elements(c);
    auto colors = type_colors(elems, base, tuple);
    return canonical_key(induced(n, c), &colors);
}

TriBool gtp_equal_search(const AbstractClass& cls, const PointedExtension& p, const PointedExtension& q,
                         const SearchBudget& budget) {
    if (!(*p.m == *q.m)) throw BaseMismatch("Galois types over different bases");
    if (p.tuple.size() != q.tuple.size()) return TriBool::Fails;
    auto a = restrict_to_generated(cls, p);
    auto b = restrict_to_generated(cls, q);
    Span s{p.m, a.n, b.n, a.embed, b.embed};
    // Generated amalgams are images of the pushout.
    int need = span_size(cls, s);
    int maxc = budget.max_codomain > 0 ? budget.max_codomain : need;
    // Amalgams with the tuples identified: the second leg is pinned on the
    // base and on the tuple by the first.
    bool found = false;
    for (auto& n3 : cls.members(maxc)) {
        if (n3->size() < std::max(a.n->size(), b.n->size())) continue;
        for_each_embedding(*a.n, *n3, {}, [&](const std::vector<int>& g1) {
            if (!cls.strong(*a.n, *n3, g1)) return true;
            std::vector<int> pre(b.n->size(), -1);
            for (std::size_t x = 0; x < a.embed.size(); ++x) pre[b.embed[x]] = g1[a.embed[x]];
            for (std::size_t i = 0; i < a.tuple.size(); ++i) {
                int& slot = pre[b.tuple[i]];
                if (slot >= 0 && slot != g1[a.tuple[i]]) return true;
                slot = g1[a.tuple[i]];
            }
            for_each_embedding(*b.n, *n3, pre, [&](const std::vector<int>& g2) {
                found = cls.strong(*b.n, *n3, g2);
                return !found;
            });
            return !found;
        });
        if (found) return TriBool::Holds;
    }
    // With a pushout in the class every chain of amalgams collapses to one,
    // and its generated part stays inside the bound.
    return cls.hereditary() && maxc >= need && cls.pushouts_in_class() ? TriBool::Fails : TriBool::Inconclusive;
}

TriBool gtp_equal(const AbstractClass& cls, const PointedExtension& p, const PointedExtension& q,
                  const SearchBudget& budget) {
    if (!(*p.m == *q.m)) throw BaseMismatch("Galois types over different bases");
    if (cls.types_complete())
        return tri(type_key(cls, *p.n, p.embed, p.tuple) == type_key(cls, *q.n, q.embed, q.tuple));
    return gtp_equal_search(cls, p, q, budget);
}

TypeCount count_types(const AbstractClass& cls, const StructPtr& m, int alpha, int bound, bool search) {
    if (bound <= 0) bound = cls.measure(*m) + alpha;
    std::size_t samples = search ? 3 : 1;
    auto count_at = [&](int b, TypeCount& tc) -> std::int64_t {
        auto types = realized_types(cls, m, alpha, b, samples);
        if (!search && cls.types_complete()) return static_cast<std::int64_t>(types.size());
        UnionFind uf(types.size());
        auto pe = [&](const Realization& r) { return PointedExtension{m, r.n, r.embed, r.tuple}; };
        bool unknown = false;
        for (auto& [key, reps] : types)
            for (std::size_t k = 1; k < reps.size(); ++k) {
                TriBool t = gtp_equal_search(cls, pe(reps[0]), pe(reps[k]));
                if (t == TriBool::Fails) tc.notes.push_back("equal keys with unequal types: " + key);
                unknown |= t == TriBool::Inconclusive;
            }
        for (std::size_t i = 0; i < types.size(); ++i)
            for (std::size_t j = i + 1; j < types.size(); ++j) {
                if (uf.find(static_cast<int>(i)) == uf.find(static_cast<int>(j))) continue;
                TriBool t = gtp_equal_search(cls, pe(types[i].second[0]), pe(types[j].second[0]));
                if (t == TriBool::Holds) uf.join(static_cast<int>(i), static_cast<int>(j));
                unknown |= t == TriBool::Inconclusive;
            }
        if (unknown) {
            tc.verdict = TriBool::Inconclusive;
            tc.notes.push_back("some type comparisons were undecided");
        }
        std::int64_t classes = 0;
        for (std::size_t i = 0; i < types.size(); ++i) classes += uf.find(static_cast<int>(i)) == static_cast<int>(i);
        return classes;
    };
    TypeCount tc;
    tc.count = count_at(bound, tc);
    tc.next = count_at(bound + 1, tc);
    tc.stable = tc.next == tc.count;
    if (!tc.stable) {
        tc.verdict = TriBool::Inconclusive;
        tc.notes.push_back("count grows when the bound is raised to " + std::to_string(bound + 1));
    }
    return tc;
}

CheckReport check_tameness(const AbstractClass& cls, const StructPtr& m, int alpha, int chi) {
    Stopwatch sw;
    CheckReport rep;
    rep.check = "tameness";
    rep.bound = cls.measure(*m) + alpha;
    auto types = realized_types(cls, m, alpha, rep.bound, 1);
    if (!cls.types_complete()) rep.inconclusive("Galois types are not certified for this class");
    std::vector<std::vector<int>> subsets;
    for (Mask a = 0; a < (Mask{1} << m->size()); ++a)
        if (std::popcount(a) < chi) subsets.push_back(mask_elements(a));
    // restricted[i][k]: type of realization i over the k-th small subset.
    std::vector<std::vector<std::string>> restricted(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) {
        const auto& r = types[i].second[0];
        for (auto& sub : subsets) {
            std::vector<int> base;
            for (int x : sub) base.push_back(r.embed[x]);
            restricted[i].push_back(type_key(cls, *r.n, base, r.tuple));
        }
    }
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = i + 1; j < types.size(); ++j) {
            ++rep.configurations;
            if (restricted[i] != restricted[j]) continue;
            const auto& a = types[i].second[0];
            const auto& b = types[j].second[0];
            rep.fail(json{{"M", structure_to_json(*m)},
                          {"first", {{"N", structure_to_json(*a.n)}, {"tuple", a.tuple}}},
                          {"second", {{"N", structure_to_json(*b.n)}, {"tuple", b.tuple}}}});
        }
    rep.notes.push_back("chi = " + std::to_string(chi));
    rep.wall_ms = sw.ms();
    return rep;
}

CheckReport check_tameness(const AbstractClass& cls, int alpha, int chi, int bound) {
    Stopwatch sw;
    CheckReport rep;
    rep.check = "tameness";
    rep.bound = bound;
    const auto& ms = cls.members(bound);
    std::vector<CheckReport> subs(ms.size());
    parallel_for(ms.size(), [&](std::size_t i) { subs[i] = check_tameness(cls, ms[i], alpha, chi); });
    for (auto& s : subs) {
        if (rep.witnesses.size() >= 20) s.witnesses.clear();
        s.notes.clear();
        rep.absorb(s);
    }
    rep.notes.push_back("chi = " + std::to_string(chi));
    rep.wall_ms = sw.ms();
    return rep;
}

json to_json(const OrderWitness& w) {
    json seq = json::array();
    for (auto& t : w.sequence) {
        json row = json::array();
        for (int x : t) row.push_back(w.m->labels().empty() ? x : w.m->labels()[x]);
        seq.push_back(row);
    }
    return json{{"M", structure_to_json(*w.m)}, {"sequence", seq}, {"uniform", w.uniform}};
}

namespace {

using Bits = std::vector<std::uint64_t>;

bool test_bit(const Bits& b, int i) { return (b[i >> 6] >> (i & 63)) & 1; }

struct PairTable {
    std::vector<std::vector<int>> tuples;
    std::vector<int> type;  // type id of tuples[i] ++ tuples[j] at i * size + j
    int types = 0;
    int at(int i, int j) const { return type[static_cast<std::size_t>(i) * tuples.size() + j]; }
};

PairTable pair_table(const AbstractClass& cls, const Structure& m, int alpha) {
    PairTable pt;
    all_tuples(m.size(), alpha, pt.tuples);
    std::size_t k = pt.tuples.size();
    pt.type.resize(k * k);
    std::map<std::string, int> ids;
    std::vector<int> joint(2 * alpha);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            std::copy(pt.tuples[i].begin(), pt.tuples[i].end(), joint.begin());
            std::copy(pt.tuples[j].begin(), pt.tuples[j].end(), joint.begin() + alpha);
            auto [it, fresh] = ids.emplace(tuple_type(cls, m, joint), pt.types);
            if (fresh) ++pt.types;
            pt.type[i * k + j] = it->second;
        }
    return pt;
}

// Sequences whose forward pairs all share one type T, with T not the type of
// the reversed pair.
std::optional<std::vector<int>> uniform_sequence(const PairTable& pt, int length) {
    int k = static_cast<int>(pt.tuples.size());
    std::size_t words = (k + 63) / 64;
    std::set<int> candidates;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (pt.at(i, j) != pt.at(j, i)) candidates.insert(pt.at(i, j));
    std::vector<int> seq;
    for (int t : candidates) {
        std::vector<Bits> out(k, Bits(words, 0));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (pt.at(i, j) == t) out[i][j >> 6] |= std::uint64_t{1} << (j & 63);
        std::function<bool(const Bits&)> grow = [&](const Bits& allowed) {
            if (static_cast<int>(seq.size()) == length) return true;
            for (int u = 0; u < k; ++u) {
                if (!test_bit(allowed, u)) continue;
                Bits next(words);
                bool any = false;
                for (std::size_t w = 0; w < words; ++w) any |= (next[w] = allowed[w] & out[u][w]) != 0;
                if (!any && static_cast<int>(seq.size()) + 1 < length) continue;
                seq.push_back(u);
                if (grow(next)) return true;
                seq.pop_back();
            }
            return false;
        };
        if (grow(Bits(words, ~std::uint64_t{0}))) return seq;
    }
    return std::nullopt;
}

// The literal condition: no forward pair type occurs as a backward one.
std::optional<std::vector<int>> literal_sequence(const PairTable& pt, int length) {
    int k = static_cast<int>(pt.tuples.size());
    std::vector<int> fwd(pt.types, 0), bwd(pt.types, 0);
    std::vector<int> seq;
    std::function<bool()> grow = [&]() {
        if (static_cast<int>(seq.size()) == length) return true;
        for (int u = 0; u < k; ++u) {
            bool ok = true;
            std::size_t added = 0;
            for (; added < seq.size(); ++added) {
                int f = pt.at(seq[added], u), b = pt.at(u, seq[added]);
                ++fwd[f], ++bwd[b];
                if (bwd[f] || fwd[b]) {
                    ok = false;
                    ++added;
                    break;
                }
            }
            if (ok) {
                seq.push_back(u);
                if (grow()) return true;
                seq.pop_back();
            }
            for (std::size_t i = 0; i < added; ++i) --fwd[pt.at(seq[i], u)], --bwd[pt.at(u, seq[i])];
        }
        return false;
    };
    if (grow()) return seq;
    return std::nullopt;
}

std::optional<OrderWitness> order_pass(const AbstractClass& cls, int alpha, int length, int size_bound,
                                       bool uniform) {
    const auto& ms = cls.members(size_bound);
    // Fixed-width frontiers keep the first hit in member order regardless of jobs.
    constexpr std::size_t kFrontier = 64;
    for (std::size_t lo = 0; lo < ms.size(); lo += kFrontier) {
        std::size_t hi = std::min(ms.size(), lo + kFrontier);
        std::vector<std::optional<std::vector<int>>> found(hi - lo);
        std::vector<PairTable> tables(hi - lo);
        parallel_for(hi - lo, [&](std::size_t i) {
            const auto& m = ms[lo + i];
            if (m->size() == 0) return;
            tables[i] = pair_table(cls, *m, alpha);
            found[i] = uniform ? uniform_sequence(tables[i], length) : literal_sequence(tables[i], length);
        });
        for (std::size_t i = 0; i < found.size(); ++i) {
            if (!found[i]) continue;
            OrderWitness w{ms[lo + i], {}, uniform};
            for (int t : *found[i]) w.sequence.push_back(tables[i].tuples[t]);
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<OrderWitness> find_order_property(const AbstractClass& cls, int alpha, int length, int size_bound,
                                                OrderSearch mode) {
    if (alpha < 1 || length < 2) throw std::invalid_argument("order property needs alpha >= 1 and length >= 2");
    return order_pass(cls, alpha, length, size_bound, mode == OrderSearch::Uniform);
}

bool verify_order_witness(const AbstractClass& cls, const OrderWitness& w) {
    std::set<std::string> fwd, bwd;
    for (std::size_t i = 0; i < w.sequence.size(); ++i)
        for (std::size_t j = i + 1; j < w.sequence.size(); ++j) {
            auto ij = w.sequence[i], ji = w.sequence[j];
            ij.insert(ij.end(), w.sequence[j].begin(), w.sequence[j].end());
            ji.insert(ji.end(), w.sequence[i].begin(), w.sequence[i].end());
            fwd.insert(type_key(cls, *w.m, {}, ij));
            bwd.insert(type_key(cls, *w.m, {}, ji));
        }
    for (auto& f : fwd)
        if (bwd.count(f)) return false;
    return true;
}

}  // namespace sil
