#include <algorithm>
#include <bit>
#include <filesystem>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "sil/catalog.hpp"
#include "sil/io.hpp"

namespace sil {

VocabPtr graph_vocabulary() {
    static VocabPtr v = make_vocabulary({{"E", 2}}, {});
    return v;
}

VocabPtr set_vocabulary() {
    static VocabPtr v = make_vocabulary({}, {});
    return v;
}

VocabPtr abelian_vocabulary() {
    static VocabPtr v = make_vocabulary({}, {{"zero", 0}, {"add", 2}, {"neg", 1}});
    return v;
}

StructPtr make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    auto g = std::make_shared<Structure>(graph_vocabulary(), n);
    for (auto [a, b] : edges) {
        g->set_rel2(0, a, b, true);
        g->set_rel2(0, b, a, true);
    }
    return g;
}

StructPtr make_set(int n) { return std::make_shared<Structure>(set_vocabulary(), n); }

int degree(const Structure& g, int v) {
    int d = 0;
    for (int u = 0; u < g.size(); ++u) d += g.rel2(0, v, u);
    return d;
}

StructPtr make_abelian(const std::vector<int>& factors) {
    int n = 1;
    for (int d : factors) n *= d;
    auto s = std::make_shared<Structure>(abelian_vocabulary(), n);
    auto digits = [&](int x) {
        std::vector<int> c;
        for (int d : factors) {
            c.push_back(x % d);
            x /= d;
        }
        return c;
    };
    auto index = [&](const std::vector<int>& c) {
        int x = 0, mul = 1;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            x += c[i] * mul;
            mul *= factors[i];
        }
        return x;
    };
    s->set_fn(0, nullptr, 0);
    for (int a = 0; a < n; ++a) {
        auto ca = digits(a);
        std::vector<int> neg(ca.size());
        for (std::size_t i = 0; i < ca.size(); ++i) neg[i] = (factors[i] - ca[i]) % factors[i];
        s->set_fn(2, &a, index(neg));
        for (int b = 0; b < n; ++b) {
            auto cb = digits(b);
            std::vector<int> sum(ca.size());
            for (std::size_t i = 0; i < ca.size(); ++i) sum[i] = (ca[i] + cb[i]) % factors[i];
            int args[2] = {a, b};
            s->set_fn(1, args, index(sum));
        }
    }
    return s;
}

Pushout glued_union(const Structure& m0, const Structure& m1, const Structure& m2, const std::vector<int>& f1,
                    const std::vector<int>& f2) {
    const Vocabulary& voc = m1.vocab();
    for (auto& [name, ar] : voc.functions)
        if (ar > 1) throw std::invalid_argument("glued union needs functions of arity <= 1");
    int a = m1.size();
    std::vector<int> leg2(m2.size(), -1);
    for (int x = 0; x < m0.size(); ++x) leg2[f2[x]] = f1[x];
    int next = a;
    for (int y = 0; y < m2.size(); ++y)
        if (leg2[y] < 0) leg2[y] = next++;
    auto p = std::make_shared<Structure>(m1.vocab_ptr(), next);
    std::vector<int> leg1(a);
    std::iota(leg1.begin(), leg1.end(), 0);
    auto copy = [&](const Structure& m, const std::vector<int>& leg) {
        std::vector<int> img;
        for (int r = 0; r < static_cast<int>(voc.relations.size()); ++r) {
            int ar = voc.relations[r].second;
            img.resize(ar);
            for_each_tuple(m.size(), ar, [&](const int* t) {
                if (!m.rel(r, t)) return;
                for (int i = 0; i < ar; ++i) img[i] = leg[t[i]];
                p->set_rel(r, img.data(), true);
            });
        }
        for (int f = 0; f < static_cast<int>(voc.functions.size()); ++f) {
            int ar = voc.functions[f].second;
            if (ar == 0) {
                if (m.size() > 0) p->set_fn(f, nullptr, leg[m.fn(f, nullptr)]);
                continue;
            }
            for (int x = 0; x < m.size(); ++x) {
                int y = leg[x];
                p->set_fn(f, &y, leg[m.fn(f, &x)]);
            }
        }
    };
    copy(m1, leg1);
    copy(m2, leg2);
    return Pushout{p, leg1, leg2, true};
}

namespace {

bool injective(const std::vector<int>& map, int n) {
    std::vector<char> used(n, 0);
    for (int v : map) {
        if (used[v]) return false;
        used[v] = 1;
    }
    return true;
}

class FinSetClass : public AbstractClass {
public:
    std::string name() const override { return "finset"; }
    const VocabPtr& vocab() const override { return voc_; }
    bool member(const Structure& s) const override { return s.vocab() == *voc_; }
    bool types_complete() const override { return true; }
    bool has_pushout() const override { return true; }
    bool pushouts_in_class() const override { return true; }
    std::optional<Pushout> pushout(const Structure& m0, const Structure& m1, const Structure& m2,
                                   const std::vector<int>& f1, const std::vector<int>& f2) const override {
        return glued_union(m0, m1, m2, f1, f2);
    }
    TriBool regular_mono(const Structure&, const Structure& tgt, const std::vector<int>& map) const override {
        return tri(injective(map, tgt.size()));
    }
    bool regular_registered() const override { return true; }

protected:
    std::vector<StructPtr> generate(int bound) const override {
        std::vector<StructPtr> out;
        for (int n = 0; n <= bound; ++n) out.push_back(make_set(n));
        return out;
    }

private:
    VocabPtr voc_ = set_vocabulary();
};

// Undirected loopless graphs under full-subgraph embeddings; kappa > 0 caps
// every degree strictly below kappa.
class GraphClass : public AbstractClass {
public:
    explicit GraphClass(int kappa) : kappa_(kappa) {}
    std::string name() const override { return kappa_ ? "klocal_graph:" + std::to_string(kappa_) : "graph"; }
    const VocabPtr& vocab() const override { return voc_; }
    bool member(const Structure& s) const override {
        if (!(s.vocab() == *voc_)) return false;
        for (int a = 0; a < s.size(); ++a) {
            if (s.rel2(0, a, a)) return false;
            for (int b = 0; b < s.size(); ++b)
                if (s.rel2(0, a, b) != s.rel2(0, b, a)) return false;
            if (kappa_ && degree(s, a) >= kappa_) return false;
        }
        return true;
    }
    bool types_complete() const override { return true; }
    bool has_pushout() const override { return true; }
    bool pushouts_in_class() const override { return kappa_ == 0; }
    std::optional<Pushout> pushout(const Structure& m0, const Structure& m1, const Structure& m2,
                                   const std::vector<int>& f1, const std::vector<int>& f2) const override {
        Pushout po = glued_union(m0, m1, m2, f1, f2);
        po.in_class = member(*po.p);
        return po;
    }
    TriBool regular_mono(const Structure& src, const Structure& tgt, const std::vector<int>& map) const override {
        if (!injective(map, tgt.size())) return TriBool::Fails;
        for (int a = 0; a < src.size(); ++a)
            for (int b = 0; b < src.size(); ++b)
                if (src.rel2(0, a, b) != tgt.rel2(0, map[a], map[b])) return TriBool::Fails;
        return TriBool::Holds;
    }
    bool regular_registered() const override { return true; }

protected:
    std::vector<StructPtr> generate(int bound) const override {
        std::vector<StructPtr> out{make_graph(0, {})};
        std::vector<StructPtr> level = out;
        for (int n = 1; n <= bound; ++n) {
            std::vector<StructPtr> next;
            std::set<std::string> seen;
            for (auto& g : level) {
                std::vector<int> deg(n - 1);
                for (int v = 0; v < n - 1; ++v) deg[v] = degree(*g, v);
                for (unsigned nb = 0; nb < (1u << (n - 1)); ++nb) {
                    if (kappa_) {
                        if (std::popcount(nb) >= kappa_) continue;
                        bool ok = true;
                        for (int v = 0; v < n - 1 && ok; ++v)
                            if ((nb >> v & 1) && deg[v] + 1 >= kappa_) ok = false;
                        if (!ok) continue;
                    }
                    auto h = std::make_shared<Structure>(voc_, n);
                    for (int a = 0; a < n - 1; ++a)
                        for (int b = 0; b < n - 1; ++b)
                            if (g->rel2(0, a, b)) h->set_rel2(0, a, b, true);
                    for (int v = 0; v < n - 1; ++v)
                        if (nb >> v & 1) {
                            h->set_rel2(0, v, n - 1, true);
                            h->set_rel2(0, n - 1, v, true);
                        }
                    if (seen.insert(canonical_key(*h)).second) next.push_back(h);
                }
            }
            out.insert(out.end(), next.begin(), next.end());
            level = std::move(next);
        }
        return out;
    }

private:
    int kappa_;
    VocabPtr voc_ = graph_vocabulary();
};

// Directed multigraphs with loops, one sort: V and E mark vertices and edges,
// src/tgt give endpoints and are the identity on vertices.
class MultigraphClass : public AbstractClass {
public:
    std::string name() const override { return "multigraph"; }
    const VocabPtr& vocab() const override { return voc_; }
    bool member(const Structure& s) const override {
        if (!(s.vocab() == *voc_)) return false;
        for (int x = 0; x < s.size(); ++x) {
            bool v = s.rel(0, &x), e = s.rel(1, &x);
            if (v == e) return false;
            int a = s.fn(0, &x), b = s.fn(1, &x);
            if (v && (a != x || b != x)) return false;
            if (e && (!s.rel(0, &a) || !s.rel(0, &b))) return false;
        }
        return true;
    }
    bool types_complete() const override { return true; }
    bool has_pushout() const override { return true; }
    bool pushouts_in_class() const override { return true; }
    std::optional<Pushout> pushout(const Structure& m0, const Structure& m1, const Structure& m2,
                                   const std::vector<int>& f1, const std::vector<int>& f2) const override {
        return glued_union(m0, m1, m2, f1, f2);
    }
    TriBool regular_mono(const Structure&, const Structure& tgt, const std::vector<int>& map) const override {
        return tri(injective(map, tgt.size()));
    }
    bool regular_registered() const override { return true; }

protected:
    std::vector<StructPtr> generate(int bound) const override {
        std::vector<StructPtr> out;
        for (int v = 0; v <= bound; ++v)
            for (int e = 0; v + e <= bound; ++e) {
                if (e > 0 && v == 0) continue;
                int slots = v * v;
                // Multisets of e endpoint pairs, as non-decreasing sequences.
                std::vector<int> seq(e, 0);
                while (true) {
                    auto s = std::make_shared<Structure>(voc_, v + e);
                    for (int x = 0; x < v; ++x) {
                        s->set_rel(0, &x, true);
                        s->set_fn(0, &x, x);
                        s->set_fn(1, &x, x);
                    }
                    for (int i = 0; i < e; ++i) {
                        int x = v + i;
                        s->set_rel(1, &x, true);
                        s->set_fn(0, &x, seq[i] % v);
                        s->set_fn(1, &x, seq[i] / v);
                    }
                    out.push_back(s);
                    int i = e - 1;
                    while (i >= 0 && seq[i] == slots - 1) --i;
                    if (i < 0) break;
                    ++seq[i];
                    for (int j = i + 1; j < e; ++j) seq[j] = seq[i];
                }
            }
        return out;
    }

private:
    VocabPtr voc_ = make_vocabulary({{"V", 1}, {"E", 1}}, {{"src", 1}, {"tgt", 1}});
};

// Abelian groups of exponent dividing `exponent`. With `elementary` set the
// class is the F_p-vector spaces and the measure is the dimension.
class AbelianClass : public AbstractClass {
public:
    AbelianClass(int exponent, bool elementary) : exp_(exponent), elementary_(elementary) {}
    std::string name() const override {
        return (elementary_ ? "vecspace:" : "module:") + std::to_string(exp_);
    }
    const VocabPtr& vocab() const override { return voc_; }
    bool member(const Structure& s) const override {
        if (!(s.vocab() == *voc_) || s.size() == 0) return false;
        int n = s.size();
        int z = s.fn(0, nullptr);
        auto add = [&](int a, int b) {
            int t[2] = {a, b};
            return s.fn(1, t);
        };
        for (int a = 0; a < n; ++a) {
            if (add(a, z) != a || add(a, s.fn(2, &a)) != z) return false;
            int m = a;
            for (int k = 1; k < exp_; ++k) m = add(m, a);
            if (m != z) return false;
            for (int b = 0; b < n; ++b) {
                if (add(a, b) != add(b, a)) return false;
                for (int c = 0; c < n; ++c)
                    if (add(add(a, b), c) != add(a, add(b, c))) return false;
            }
        }
        return true;
    }
    int measure(const Structure& s) const override {
        if (!elementary_) return s.size();
        int d = 0;
        for (int n = s.size(); n > 1; n /= exp_) ++d;
        return d;
    }
    std::string measure_name() const override { return elementary_ ? "dimension" : "size"; }
    int joint_measure(int a, int b) const override { return elementary_ ? a + b : a * b; }
    bool types_complete() const override { return true; }
    bool has_pushout() const override { return true; }
    bool pushouts_in_class() const override { return true; }
    std::optional<Pushout> pushout(const Structure& m0, const Structure& m1, const Structure& m2,
                                   const std::vector<int>& f1, const std::vector<int>& f2) const override;
    TriBool regular_mono(const Structure&, const Structure& tgt, const std::vector<int>& map) const override {
        return tri(injective(map, tgt.size()));
    }
    bool regular_registered() const override { return true; }

protected:
    std::vector<StructPtr> generate(int bound) const override {
        std::vector<StructPtr> out;
        if (elementary_) {
            for (int d = 0; d <= bound; ++d) out.push_back(make_abelian(std::vector<int>(d, exp_)));
            return out;
        }
        std::vector<int> divisors;
        for (int d = 2; d <= exp_; ++d)
            if (exp_ % d == 0) divisors.push_back(d);
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int size) {
            out.push_back(make_abelian(cur));
            for (int d : divisors) {
                if (!cur.empty() && d % cur.back() != 0) continue;
                if (static_cast<long long>(size) * d > bound) continue;
                cur.push_back(d);
                rec(size * d);
                cur.pop_back();
            }
        };
        if (bound >= 1) rec(1);
        return out;
    }

private:
    int exp_;
    bool elementary_;
    VocabPtr voc_ = abelian_vocabulary();
};

std::optional<Pushout> AbelianClass::pushout(const Structure& m0, const Structure& m1, const Structure& m2,
                                             const std::vector<int>& f1, const std::vector<int>& f2) const {
    int a = m1.size(), b = m2.size();
    auto add1 = [&](int x, int y) {
        int t[2] = {x, y};
        return m1.fn(1, t);
    };
    auto add2 = [&](int x, int y) {
        int t[2] = {x, y};
        return m2.fn(1, t);
    };
    auto padd = [&](int p, int q) { return add1(p % a, q % a) + a * add2(p / a, q / a); };
    std::vector<int> kernel;
    for (int x = 0; x < m0.size(); ++x) {
        int y = f2[x];
        kernel.push_back(f1[x] + a * m2.fn(2, &y));
    }
    int pairs = a * b;
    std::vector<int> rep(pairs);
    for (int p = 0; p < pairs; ++p) {
        int best = pairs;
        for (int k : kernel) best = std::min(best, padd(p, k));
        rep[p] = best;
    }
    std::vector<int> reps = rep;
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    std::vector<int> index(pairs, -1);
    for (std::size_t i = 0; i < reps.size(); ++i) index[reps[i]] = static_cast<int>(i);
    int n = static_cast<int>(reps.size());
    auto p = std::make_shared<Structure>(voc_, n);
    int z1 = m1.fn(0, nullptr), z2 = m2.fn(0, nullptr);
    p->set_fn(0, nullptr, index[rep[z1 + a * z2]]);
    for (int i = 0; i < n; ++i) {
        int pi = reps[i];
        int x = pi % a, y = pi / a;
        int nx = m1.fn(2, &x), ny = m2.fn(2, &y);
        p->set_fn(2, &i, index[rep[nx + a * ny]]);
        for (int j = 0; j < n; ++j) {
            int t[2] = {i, j};
            p->set_fn(1, t, index[rep[padd(pi, reps[j])]]);
        }
    }
    Pushout po{p, std::vector<int>(a), std::vector<int>(b), true};
    for (int x = 0; x < a; ++x) po.leg1[x] = index[rep[x + a * z2]];
    for (int y = 0; y < b; ++y) po.leg2[y] = index[rep[z1 + a * y]];
    return po;
}

class DirectoryClass : public AbstractClass {
public:
    DirectoryClass(const std::string& dir, const std::string& strong_mode) : dir_(dir), mode_(strong_mode) {
        namespace fs = std::filesystem;
        if (mode_ != "induced" && mode_ != "all")
            throw std::invalid_argument("strong predicate must be 'induced' or 'all'");
        if (!fs::is_directory(dir)) throw ParseError(dir + ": not a directory");
        std::vector<std::string> files;
        for (auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json") files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw ParseError(dir + ": no .json structure files");
        for (auto& f : files) {
            Structure s = read_structure_file(f, voc_);
            if (!voc_) voc_ = s.vocab_ptr();
            std::string key = canonical_key(s);
            if (keys_.insert(key).second) list_.push_back(std::make_shared<Structure>(std::move(s)));
        }
        hereditary_ = true;
        for (auto& m : list_)
            for (Mask c : closed_subsets(*m))
                if (!keys_.count(canonical_key(induced(*m, c)))) {
                    if (c == 0 && m->size() > 0 && !m->vocab().relational()) continue;
                    hereditary_ = false;
                }
    }
    std::string name() const override { return "user:" + dir_; }
    const VocabPtr& vocab() const override { return voc_; }
    bool member(const Structure& s) const override { return s.vocab() == *voc_ && keys_.count(canonical_key(s)); }
    bool hereditary() const override { return hereditary_; }

protected:
    std::vector<StructPtr> generate(int bound) const override {
        std::vector<StructPtr> out;
        for (auto& m : list_)
            if (m->size() <= bound) out.push_back(m);
        return out;
    }

private:
    std::string dir_, mode_;
    VocabPtr voc_;
    std::set<std::string> keys_;
    std::vector<StructPtr> list_;
    bool hereditary_ = false;
};

int parse_param(const std::string& spec, const std::string& prefix) {
    std::string rest = spec.substr(prefix.size());
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit))
        throw UnknownName("class '" + spec + "': expected a numeric parameter");
    return std::stoi(rest);
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

std::vector<std::string> builtin_class_names() {
    return {"finset", "graph", "multigraph", "klocal_graph:K", "vecspace:P", "module:N", "user:DIR"};
}

ClassPtr make_class(const std::string& spec, const std::string& strong_mode) {
    static std::mutex mu;
    static std::map<std::string, ClassPtr> cache;
    std::string key = spec.rfind("user:", 0) == 0 ? spec + "|" + strong_mode : spec;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    ClassPtr c;
    if (spec == "finset") {
        c = std::make_shared<FinSetClass>();
    } else if (spec == "graph") {
        c = std::make_shared<GraphClass>(0);
    } else if (spec == "multigraph") {
        c = std::make_shared<MultigraphClass>();
    } else if (spec.rfind("klocal_graph:", 0) == 0) {
        int k = parse_param(spec, "klocal_graph:");
        if (k < 1) throw UnknownName("klocal_graph needs a degree bound >= 1");
        c = std::make_shared<GraphClass>(k);
    } else if (spec.rfind("vecspace:", 0) == 0) {
        int p = parse_param(spec, "vecspace:");
        if (!is_prime(p)) throw UnknownName("vecspace needs a prime field size");
        c = std::make_shared<AbelianClass>(p, true);
    } else if (spec.rfind("module:", 0) == 0) {
        int n = parse_param(spec, "module:");
        if (n < 2) throw UnknownName("module needs n >= 2");
        c = std::make_shared<AbelianClass>(n, false);
    } else if (spec.rfind("user:", 0) == 0) {
        c = std::make_shared<DirectoryClass>(spec.substr(5), strong_mode);
    } else {
        throw UnknownName("unknown class '" + spec + "'");
    }
    cache[key] = c;
    return c;
}

}  // namespace sil
