#include "sil/structures.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace sil {

namespace {

std::size_t ipow(int n, int k) {
    std::size_t r = 1;
    for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
    return r;
}

void check_same_vocab(const Structure& a, const Structure& b) {
    if (a.vocab_ptr() != b.vocab_ptr() && !(a.vocab() == b.vocab()))
        throw VocabularyMismatch("structures do not share a vocabulary");
}

}  // namespace

int Vocabulary::relation_index(const std::string& name) const {
    for (std::size_t i = 0; i < relations.size(); ++i)
        if (relations[i].first == name) return static_cast<int>(i);
    return -1;
}

int Vocabulary::function_index(const std::string& name) const {
    for (std::size_t i = 0; i < functions.size(); ++i)
        if (functions[i].first == name) return static_cast<int>(i);
    return -1;
}

VocabPtr make_vocabulary(std::vector<std::pair<std::string, int>> relations,
                         std::vector<std::pair<std::string, int>> functions) {
    std::set<std::string> names;
    for (auto& [name, ar] : relations) {
        if (ar < 1) throw std::invalid_argument("relation '" + name + "' needs arity >= 1");
        if (!names.insert(name).second) throw std::invalid_argument("duplicate symbol '" + name + "'");
    }
    for (auto& [name, ar] : functions) {
        if (ar < 0) throw std::invalid_argument("function '" + name + "' has negative arity");
        if (!names.insert(name).second) throw std::invalid_argument("duplicate symbol '" + name + "'");
    }
    auto v = std::make_shared<Vocabulary>();
    v->relations = std::move(relations);
    v->functions = std::move(functions);
    return v;
}

Structure::Structure(VocabPtr vocab, int n) : vocab_(std::move(vocab)), n_(n) {
    if (n < 0) throw std::invalid_argument("negative universe size");
    for (auto& [name, ar] : vocab_->relations) rels_.emplace_back(ipow(n, ar), 0);
    for (auto& [name, ar] : vocab_->functions) fns_.emplace_back(ipow(n, ar), 0);
    labels_.resize(n);
    for (int i = 0; i < n; ++i) labels_[i] = i;
}

std::size_t Structure::tuple_index(const int* t, int arity) const {
    std::size_t idx = 0, mul = 1;
    for (int i = 0; i < arity; ++i) {
        idx += static_cast<std::size_t>(t[i]) * mul;
        mul *= static_cast<std::size_t>(n_);
    }
    return idx;
}

void for_each_tuple(int n, int arity, const std::function<void(const int*)>& fn) {
    std::vector<int> t(arity, 0);
    if (arity == 0) {
        fn(t.data());
        return;
    }
    if (n == 0) return;
    while (true) {
        fn(t.data());
        int i = 0;
        while (i < arity && ++t[i] == n) t[i++] = 0;
        if (i == arity) break;
    }
}

std::vector<std::vector<int>> Structure::tuples(int r) const {
    std::vector<std::vector<int>> out;
    int ar = arity_r(r);
    for_each_tuple(n_, ar, [&](const int* t) {
        if (rel(r, t)) out.emplace_back(t, t + ar);
    });
    std::sort(out.begin(), out.end());
    return out;
}

void Structure::validate() const {
    if (n_ == 0) {
        for (auto& [name, ar] : vocab_->functions)
            if (ar == 0) throw std::invalid_argument("empty universe but constant '" + name + "'");
    }
    for (std::size_t f = 0; f < fns_.size(); ++f)
        for (int v : fns_[f])
            if (v < 0 || v >= n_)
                throw std::invalid_argument("function '" + vocab_->functions[f].first +
                                            "' leaves the universe");
}

bool Structure::operator==(const Structure& o) const {
    return n_ == o.n_ && vocab() == o.vocab() && rels_ == o.rels_ && fns_ == o.fns_;
}

Embedding identity_embedding(const StructPtr& m) {
    Embedding e{m, m, std::vector<int>(m->size())};
    for (int i = 0; i < m->size(); ++i) e.map[i] = i;
    return e;
}

Embedding compose(const Embedding& g, const Embedding& f) {
    if (f.target->size() != g.source->size()) throw std::invalid_argument("compose: endpoints differ");
    Embedding e{f.source, g.target, std::vector<int>(f.map.size())};
    for (std::size_t i = 0; i < f.map.size(); ++i) e.map[i] = g.map[f.map[i]];
    return e;
}

bool same_arrow(const Embedding& a, const Embedding& b) {
    return a.map == b.map && (a.source == b.source || *a.source == *b.source) &&
           (a.target == b.target || *a.target == *b.target);
}

namespace {

bool check_map(const Structure& src, const Structure& tgt, const std::vector<int>& map, bool reflect,
               bool injective) {
    check_same_vocab(src, tgt);
    int n = src.size();
    if (static_cast<int>(map.size()) != n) return false;
    std::vector<char> used(tgt.size(), 0);
    for (int v : map) {
        if (v < 0 || v >= tgt.size()) return false;
        if (injective) {
            if (used[v]) return false;
            used[v] = 1;
        }
    }
    const Vocabulary& voc = src.vocab();
    std::vector<int> img;
    for (std::size_t r = 0; r < voc.relations.size(); ++r) {
        int ar = voc.relations[r].second;
        bool ok = true;
        img.assign(ar, 0);
        for_each_tuple(n, ar, [&](const int* t) {
            if (!ok) return;
            for (int i = 0; i < ar; ++i) img[i] = map[t[i]];
            bool a = src.rel(static_cast<int>(r), t), b = tgt.rel(static_cast<int>(r), img.data());
            if (reflect ? (a != b) : (a && !b)) ok = false;
        });
        if (!ok) return false;
    }
    for (std::size_t f = 0; f < voc.functions.size(); ++f) {
        int ar = voc.functions[f].second;
        bool ok = true;
        img.assign(ar, 0);
        if (n == 0 && ar > 0) continue;
        for_each_tuple(n, ar, [&](const int* t) {
            if (!ok) return;
            for (int i = 0; i < ar; ++i) img[i] = map[t[i]];
            if (map[src.fn(static_cast<int>(f), t)] != tgt.fn(static_cast<int>(f), img.data())) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool is_embedding(const Structure& src, const Structure& tgt, const std::vector<int>& map) {
    return check_map(src, tgt, map, true, true);
}

bool is_embedding(const Embedding& e) { return is_embedding(*e.source, *e.target, e.map); }

bool is_homomorphism(const Structure& src, const Structure& tgt, const std::vector<int>& map) {
    return check_map(src, tgt, map, false, false);
}

namespace {

class EmbeddingSearch {
public:
    EmbeddingSearch(const Structure& m, const Structure& n,
                    const std::function<bool(const std::vector<int>&)>& cb)
        : m_(m), n_(n), cb_(cb), img_(m.size(), -1), used_(n.size(), 0) {}

    void run(const std::vector<int>& pre) {
        if (m_.size() > n_.size()) return;
        const Vocabulary& voc = m_.vocab();
        for (std::size_t f = 0; f < voc.functions.size(); ++f) {
            if (voc.functions[f].second != 0) continue;
            if (m_.size() == 0) return;
            if (!assign(m_.fn(static_cast<int>(f), nullptr), n_.fn(static_cast<int>(f), nullptr))) return;
        }
        for (std::size_t x = 0; x < pre.size(); ++x)
            if (pre[x] >= 0 && !assign(static_cast<int>(x), pre[x])) return;
        recurse();
    }

private:
    bool recurse() {
        int x = -1;
        for (int i = 0; i < m_.size(); ++i)
            if (img_[i] < 0) {
                x = i;
                break;
            }
        if (x < 0) return cb_(img_);
        for (int y = 0; y < n_.size(); ++y) {
            if (used_[y]) continue;
            std::size_t mark = trail_.size();
            bool ok = assign(x, y);
            bool go_on = true;
            if (ok) go_on = recurse();
            undo(mark);
            if (!go_on) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int u = trail_.back();
            trail_.pop_back();
            used_[img_[u]] = 0;
            img_[u] = -1;
        }
    }

    // Tuples over assigned elements that contain u somewhere.
    template <class F>
    bool over_tuples_with(int u, int arity, F&& f) {
        std::size_t a = trail_.size();
        std::vector<std::size_t> idx(arity, 0);
        std::vector<int> t(arity);
        if (arity == 0) return true;
        while (true) {
            bool has = false;
            for (int i = 0; i < arity; ++i) {
                t[i] = trail_[idx[i]];
                if (t[i] == u) has = true;
            }
            if (has && !f(t.data())) return false;
            int i = 0;
            while (i < arity && ++idx[i] == a) idx[i++] = 0;
            if (i == arity) break;
        }
        return true;
    }

    bool assign(int x0, int y0) {
        std::vector<std::pair<int, int>> queue{{x0, y0}};
        const Vocabulary& voc = m_.vocab();
        std::vector<int> img;
        while (!queue.empty()) {
            auto [u, v] = queue.back();
            queue.pop_back();
            if (img_[u] == v) continue;
            if (img_[u] >= 0 || used_[v]) return false;
            img_[u] = v;
            used_[v] = 1;
            trail_.push_back(u);
            for (std::size_t r = 0; r < voc.relations.size(); ++r) {
                int ar = voc.relations[r].second;
                img.resize(ar);
                bool ok = over_tuples_with(u, ar, [&](const int* t) {
                    for (int i = 0; i < ar; ++i) img[i] = img_[t[i]];
                    return m_.rel(static_cast<int>(r), t) == n_.rel(static_cast<int>(r), img.data());
                });
                if (!ok) return false;
            }
            for (std::size_t f = 0; f < voc.functions.size(); ++f) {
                int ar = voc.functions[f].second;
                if (ar == 0) continue;
                img.resize(ar);
                over_tuples_with(u, ar, [&](const int* t) {
                    for (int i = 0; i < ar; ++i) img[i] = img_[t[i]];
                    queue.emplace_back(m_.fn(static_cast<int>(f), t), n_.fn(static_cast<int>(f), img.data()));
                    return true;
                });
            }
        }
        return true;
    }

    const Structure& m_;
    const Structure& n_;
    const std::function<bool(const std::vector<int>&)>& cb_;
    std::vector<int> img_;
    std::vector<char> used_;
    std::vector<int> trail_;
};

}  // namespace

void for_each_embedding(const Structure& m, const Structure& n, const std::vector<int>& pre,
                        const std::function<bool(const std::vector<int>&)>& cb) {
    check_same_vocab(m, n);
    EmbeddingSearch s(m, n, cb);
    s.run(pre);
}

std::vector<std::vector<int>> enumerate_embedding_maps(const Structure& m, const Structure& n) {
    std::vector<std::vector<int>> out;
    for_each_embedding(m, n, {}, [&](const std::vector<int>& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

std::vector<Embedding> enumerate_embeddings(const StructPtr& m, const StructPtr& n) {
    std::vector<Embedding> out;
    for (auto& f : enumerate_embedding_maps(*m, *n)) out.push_back(Embedding{m, n, f});
    return out;
}

std::optional<std::vector<int>> first_embedding(const Structure& m, const Structure& n,
                                                const std::vector<int>& pre) {
    std::optional<std::vector<int>> out;
    for_each_embedding(m, n, pre, [&](const std::vector<int>& f) {
        out = f;
        return false;
    });
    return out;
}

std::optional<Embedding> are_isomorphic(const StructPtr& m, const StructPtr& n) {
    check_same_vocab(*m, *n);
    if (m->size() != n->size()) return std::nullopt;
    if (canonical_key(*m) != canonical_key(*n)) return std::nullopt;
    auto f = first_embedding(*m, *n, {});
    if (!f) return std::nullopt;
    return Embedding{m, n, *f};
}

std::vector<std::vector<int>> automorphisms(const Structure& m) { return enumerate_embedding_maps(m, m); }

namespace {

class Canonizer {
public:
    Canonizer(const Structure& m, const std::vector<int>* colors) : m_(m) {
        int n = m.size();
        const Vocabulary& voc = m.vocab();
        inc_.resize(n);
        int nrel = static_cast<int>(voc.relations.size());
        for (int r = 0; r < nrel; ++r) {
            int ar = voc.relations[r].second;
            for_each_tuple(n, ar, [&](const int* t) {
                if (!m.rel(r, t)) return;
                add_fact(r, std::vector<int>(t, t + ar));
            });
        }
        for (std::size_t f = 0; f < voc.functions.size(); ++f) {
            int ar = voc.functions[f].second;
            if (n == 0) continue;
            for_each_tuple(n, ar, [&](const int* t) {
                std::vector<int> el(t, t + ar);
                el.push_back(m.fn(static_cast<int>(f), t));
                add_fact(nrel + static_cast<int>(f), std::move(el));
            });
        }
        init_.assign(n, 0);
        if (colors) init_ = *colors;
    }

    std::vector<int> run() {
        std::vector<int> c = rank(init_);
        c = refine(c);
        best_.clear();
        std::vector<int> path;
        search(c, path);
        return best_;
    }

private:
    struct Fact {
        int sym;
        std::vector<int> el;
    };

    void add_fact(int sym, std::vector<int> el) {
        int id = static_cast<int>(facts_.size());
        std::set<int> seen;
        for (int x : el)
            if (seen.insert(x).second) inc_[x].push_back(id);
        facts_.push_back(Fact{sym, std::move(el)});
    }

    static std::vector<int> rank(const std::vector<int>& key) {
        std::vector<int> sorted = key;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> out(key.size());
        for (std::size_t i = 0; i < key.size(); ++i)
            out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), key[i]) - sorted.begin());
        return out;
    }

    static int count_distinct(const std::vector<int>& c) {
        std::vector<int> s = c;
        std::sort(s.begin(), s.end());
        return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
    }

    std::vector<int> refine(std::vector<int> c) const {
        int n = m_.size();
        int classes = count_distinct(c);
        while (true) {
            std::vector<std::vector<int>> sig(n);
            for (int x = 0; x < n; ++x) {
                std::vector<std::vector<int>> entries;
                for (int id : inc_[x]) {
                    const Fact& f = facts_[id];
                    std::vector<int> e{f.sym};
                    int pos = 0;
                    for (std::size_t i = 0; i < f.el.size(); ++i)
                        if (f.el[i] == x) pos |= 1 << i;
                    e.push_back(pos);
                    for (int y : f.el) e.push_back(c[y]);
                    entries.push_back(std::move(e));
                }
                std::sort(entries.begin(), entries.end());
                sig[x].push_back(c[x]);
                for (auto& e : entries) {
                    sig[x].push_back(static_cast<int>(e.size()));
                    sig[x].insert(sig[x].end(), e.begin(), e.end());
                }
            }
            std::vector<std::vector<int>> sorted = sig;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            std::vector<int> nc(n);
            for (int x = 0; x < n; ++x)
                nc[x] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[x]) - sorted.begin());
            int k = static_cast<int>(sorted.size());
            c = std::move(nc);
            if (k == classes) return c;
            classes = k;
        }
    }

    std::vector<int> encode(const std::vector<int>& lab) const {
        int n = m_.size();
        std::vector<int> inv(n);
        for (int x = 0; x < n; ++x) inv[lab[x]] = x;
        std::vector<int> enc{n};
        for (int i = 0; i < n; ++i) enc.push_back(init_[inv[i]]);
        const Vocabulary& voc = m_.vocab();
        int nrel = static_cast<int>(voc.relations.size());
        std::vector<std::vector<std::vector<int>>> per_sym(nrel);
        for (const Fact& f : facts_) {
            if (f.sym >= nrel) continue;
            std::vector<int> t;
            for (auto it = f.el.rbegin(); it != f.el.rend(); ++it) t.push_back(lab[*it]);
            per_sym[f.sym].push_back(std::move(t));
        }
        for (int r = 0; r < nrel; ++r) {
            auto& v = per_sym[r];
            std::sort(v.begin(), v.end());
            enc.push_back(-1 - static_cast<int>(v.size()));
            for (auto& t : v) enc.insert(enc.end(), t.begin(), t.end());
        }
        for (std::size_t f = 0; f < voc.functions.size(); ++f) {
            int ar = voc.functions[f].second;
            if (n == 0) continue;
            std::vector<int> args(ar);
            enc.push_back(-1);
            for_each_tuple(n, ar, [&](const int* t) {
                for (int i = 0; i < ar; ++i) args[i] = inv[t[i]];
                enc.push_back(lab[m_.fn(static_cast<int>(f), args.data())]);
            });
        }
        return enc;
    }

    bool transposition_aut(int u, int v) const {
        if (init_[u] != init_[v]) return false;
        std::vector<int> sigma(m_.size());
        for (int i = 0; i < m_.size(); ++i) sigma[i] = i;
        std::swap(sigma[u], sigma[v]);
        return is_embedding(m_, m_, sigma);
    }

    // Records x -> y where leaf labelings a and b give x and y the same label.
    void record_automorphism(const std::vector<int>& a, const std::vector<int>& b) {
        int n = m_.size();
        std::vector<int> inv(n), g(n);
        for (int x = 0; x < n; ++x) inv[b[x]] = x;
        for (int x = 0; x < n; ++x) g[x] = inv[a[x]];
        bool identity = true;
        for (int x = 0; x < n && identity; ++x) identity = g[x] == x;
        if (!identity) auts_.push_back(std::move(g));
    }

    // Union-find root of x under the found automorphisms fixing the path.
    std::vector<int> orbits_fixing(const std::vector<int>& path) const {
        int n = m_.size();
        std::vector<int> parent(n);
        for (int x = 0; x < n; ++x) parent[x] = x;
        std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
        for (auto& g : auts_) {
            bool fixes = true;
            for (int p : path)
                if (g[p] != p) {
                    fixes = false;
                    break;
                }
            if (!fixes) continue;
            for (int x = 0; x < n; ++x) parent[root(x)] = root(g[x]);
        }
        for (int x = 0; x < n; ++x) parent[x] = root(x);
        return parent;
    }

    void search(const std::vector<int>& c, std::vector<int>& path) {
        int n = m_.size();
        std::vector<int> cnt(n + 1, 0);
        for (int x : c) cnt[x]++;
        int cell = -1;
        for (int k = 0; k < n; ++k)
            if (cnt[k] > 1) {
                cell = k;
                break;
            }
        if (cell < 0) {
            std::vector<int> enc = encode(c);
            if (first_.empty()) {
                first_ = enc;
                first_lab_ = c;
            } else if (enc == first_) {
                record_automorphism(c, first_lab_);
            }
            if (best_.empty() || enc < best_) {
                best_ = std::move(enc);
                best_lab_ = c;
            } else if (enc == best_) {
                record_automorphism(c, best_lab_);
            }
            return;
        }
        std::vector<int> explored;
        for (int v = 0; v < n; ++v) {
            if (c[v] != cell) continue;
            bool skip = false;
            if (!explored.empty() && !auts_.empty()) {
                auto orb = orbits_fixing(path);
                for (int u : explored)
                    if (orb[u] == orb[v]) {
                        skip = true;
                        break;
                    }
            }
            for (std::size_t i = 0; i < explored.size() && !skip; ++i)
                if (transposition_aut(explored[i], v)) skip = true;
            if (skip) continue;
            explored.push_back(v);
            std::vector<int> c2(n);
            for (int x = 0; x < n; ++x) c2[x] = 2 * c[x] + ((c[x] == cell && x != v) ? 1 : 0);
            path.push_back(v);
            search(refine(rank(c2)), path);
            path.pop_back();
        }
    }

    const Structure& m_;
    std::vector<Fact> facts_;
    std::vector<std::vector<int>> inc_;
    std::vector<int> init_;
    std::vector<int> best_, best_lab_, first_, first_lab_;
    std::vector<std::vector<int>> auts_;
};

}  // namespace

std::vector<int> canonical_form(const Structure& m, const std::vector<int>* colors) {
    Canonizer c(m, colors);
    return c.run();
}

std::string canonical_key(const Structure& m, const std::vector<int>* colors) {
    std::vector<int> enc = canonical_form(m, colors);
    std::string s;
    s.reserve(enc.size() * 4 + 64);
    for (auto& [name, ar] : m.vocab().relations) s += name + "/" + std::to_string(ar) + ";";
    for (auto& [name, ar] : m.vocab().functions) s += name + "\\" + std::to_string(ar) + ";";
    s += '|';
    for (int v : enc) {
        auto u = static_cast<std::uint32_t>(v);
        for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
    }
    return s;
}

Mask full_mask(int n) {
    if (n > 64) throw std::invalid_argument("mask over more than 64 elements");
    return n == 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

std::vector<int> mask_elements(Mask m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

Mask image_mask(const std::vector<int>& map) {
    Mask m = 0;
    for (int v : map) {
        if (v >= 64) throw std::invalid_argument("mask over more than 64 elements");
        m |= Mask{1} << v;
    }
    return m;
}

Structure induced(const Structure& m, const std::vector<int>& elems) {
    int k = static_cast<int>(elems.size());
    std::vector<int> pos(m.size(), -1);
    for (int i = 0; i < k; ++i) pos[elems[i]] = i;
    Structure s(m.vocab_ptr(), k);
    const Vocabulary& voc = m.vocab();
    std::vector<int> img;
    for (std::size_t r = 0; r < voc.relations.size(); ++r) {
        int ar = voc.relations[r].second;
        img.resize(ar);
        for_each_tuple(k, ar, [&](const int* t) {
            for (int i = 0; i < ar; ++i) img[i] = elems[t[i]];
            if (m.rel(static_cast<int>(r), img.data())) s.set_rel(static_cast<int>(r), t, true);
        });
    }
    for (std::size_t f = 0; f < voc.functions.size(); ++f) {
        int ar = voc.functions[f].second;
        img.resize(ar);
        if (k == 0) {
            if (ar == 0) throw std::invalid_argument("induced: empty set cannot hold a constant");
            continue;
        }
        for_each_tuple(k, ar, [&](const int* t) {
            for (int i = 0; i < ar; ++i) img[i] = elems[t[i]];
            int v = pos[m.fn(static_cast<int>(f), img.data())];
            if (v < 0) throw std::invalid_argument("induced: subset not closed under functions");
            s.set_fn(static_cast<int>(f), t, v);
        });
    }
    std::vector<int> labels(k);
    for (int i = 0; i < k; ++i) labels[i] = m.labels()[elems[i]];
    s.set_labels(std::move(labels));
    return s;
}

Structure induced(const Structure& m, Mask elems) { return induced(m, mask_elements(elems)); }

bool closed_under_functions(const Structure& m, Mask elems) { return generated(m, elems) == elems; }

Mask generated(const Structure& m, Mask elems) {
    const Vocabulary& voc = m.vocab();
    if (voc.functions.empty()) return elems;
    Mask cur = elems;
    for (std::size_t f = 0; f < voc.functions.size(); ++f)
        if (voc.functions[f].second == 0 && m.size() > 0) cur |= Mask{1} << m.fn(static_cast<int>(f), nullptr);
    while (true) {
        Mask next = cur;
        std::vector<int> el = mask_elements(cur);
        int k = static_cast<int>(el.size());
        std::vector<int> img;
        for (std::size_t f = 0; f < voc.functions.size(); ++f) {
            int ar = voc.functions[f].second;
            if (ar == 0) continue;
            img.resize(ar);
            for_each_tuple(k, ar, [&](const int* t) {
                for (int i = 0; i < ar; ++i) img[i] = el[t[i]];
                next |= Mask{1} << m.fn(static_cast<int>(f), img.data());
            });
        }
        if (next == cur) return cur;
        cur = next;
    }
}

std::vector<Mask> closed_subsets(const Structure& m) {
    int n = m.size();
    if (n > 24) throw std::invalid_argument("closed_subsets: universe too large");
    std::vector<Mask> out;
    const Vocabulary& voc = m.vocab();
    if (voc.relational()) {
        for (Mask s = 0; s < (Mask{1} << n); ++s) out.push_back(s);
        return out;
    }
    std::set<Mask> seen;
    for (Mask s = 0; s < (Mask{1} << n); ++s) {
        Mask g = generated(m, s);
        if (seen.insert(g).second) {}
    }
    out.assign(seen.begin(), seen.end());
    return out;
}

}  // namespace sil
