#include "sil/abstract_class.hpp"

#include <algorithm>
#include <set>

#include "sil/io.hpp"

namespace sil {

std::optional<Pushout> AbstractClass::pushout(const Structure&, const Structure&, const Structure&,
                                              const std::vector<int>&, const std::vector<int>&) const {
    return std::nullopt;
}

TriBool AbstractClass::regular_mono(const Structure&, const Structure& tgt, const std::vector<int>& map) const {
    std::vector<char> used(tgt.size(), 0);
    for (int v : map) {
        if (used[v]) return TriBool::Fails;
        used[v] = 1;
    }
    return TriBool::Inconclusive;
}

namespace {

std::size_t tuple_count(const Structure& s) {
    std::size_t c = 0;
    for (int r = 0; r < static_cast<int>(s.vocab().relations.size()); ++r)
        for (auto v : s.rel_table(r)) c += v;
    return c;
}

}  // namespace

const AbstractClass::MemberTable& AbstractClass::table(int bound) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = members_.find(bound);
    if (it != members_.end()) return it->second;
    struct Row {
        int measure, size;
        std::size_t tuples;
        std::string key;
        StructPtr s;
    };
    std::vector<Row> rows;
    std::set<std::string> seen;
    for (auto& s : generate(bound)) {
        if (measure(*s) > bound) continue;
        std::string key = canonical_key(*s);
        if (!seen.insert(key).second) continue;
        rows.push_back(Row{measure(*s), s->size(), tuple_count(*s), std::move(key), s});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.measure != b.measure) return a.measure < b.measure;
        if (a.size != b.size) return a.size < b.size;
        if (a.tuples != b.tuples) return a.tuples < b.tuples;
        return a.key < b.key;
    });
    MemberTable t;
    for (auto& r : rows) {
        t.index[r.key] = static_cast<int>(t.list.size());
        t.list.push_back(r.s);
    }
    return members_.emplace(bound, std::move(t)).first->second;
}

const std::vector<StructPtr>& AbstractClass::members(int bound) const { return table(bound).list; }

const std::vector<std::vector<int>>& AbstractClass::automorphisms_of(const StructPtr& m) const {
    {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = auts_.find(m.get());
        if (it != auts_.end()) return it->second.second;
    }
    auto a = automorphisms(*m);
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return auts_.emplace(m.get(), std::make_pair(m, std::move(a))).first->second.second;
}

std::vector<Mask> AbstractClass::carriers_of(const Structure& n) const {
    std::vector<Mask> out;
    if (n.size() > 24) throw std::invalid_argument("carriers: universe too large");
    auto keep = [&](Mask s) { return member(induced(n, s)); };
    if (n.vocab().relational()) {
        for (Mask s = 0; s < (Mask{1} << n.size()); ++s)
            if (keep(s)) out.push_back(s);
        return out;
    }
    std::set<Mask> seen;
    std::vector<Mask> queue{generated(n, 0)};
    seen.insert(queue[0]);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        Mask c = queue[i];
        for (int x = 0; x < n.size(); ++x) {
            if (c >> x & 1) continue;
            Mask d = generated(n, c | (Mask{1} << x));
            if (seen.insert(d).second) queue.push_back(d);
        }
    }
    for (Mask s : seen)
        if (keep(s)) out.push_back(s);
    return out;
}

const std::vector<Mask>& AbstractClass::carriers(const StructPtr& n) const {
    {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = carriers_.find(n.get());
        if (it != carriers_.end()) return it->second.second;
    }
    auto c = carriers_of(*n);
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return carriers_.emplace(n.get(), std::make_pair(n, std::move(c))).first->second.second;
}

Mask AbstractClass::closure(const Structure& n, Mask s) const { return generated(n, s); }

std::optional<std::pair<int, std::vector<int>>> AbstractClass::locate(const Structure& s, int bound) const {
    const MemberTable& t = table(bound);
    auto it = t.index.find(canonical_key(s));
    if (it == t.index.end()) return std::nullopt;
    auto iso = first_embedding(s, *t.list[it->second], {});
    if (!iso) return std::nullopt;
    return std::make_pair(it->second, *iso);
}

std::optional<std::vector<int>> mediating_map(const Pushout& po, const Structure& n, const std::vector<int>& g1,
                                              const std::vector<int>& g2) {
    const Structure& p = *po.p;
    std::vector<int> u(p.size(), -1);
    auto set = [&](int x, int v) {
        if (u[x] >= 0 && u[x] != v) return false;
        u[x] = v;
        return true;
    };
    for (std::size_t i = 0; i < po.leg1.size(); ++i)
        if (!set(po.leg1[i], g1[i])) return std::nullopt;
    for (std::size_t i = 0; i < po.leg2.size(); ++i)
        if (!set(po.leg2[i], g2[i])) return std::nullopt;
    const Vocabulary& voc = p.vocab();
    bool changed = true;
    bool ok = true;
    std::vector<int> img;
    while (changed && ok) {
        changed = false;
        for (int f = 0; f < static_cast<int>(voc.functions.size()) && ok; ++f) {
            int ar = voc.functions[f].second;
            img.resize(ar);
            if (p.size() == 0) continue;
            for_each_tuple(p.size(), ar, [&](const int* t) {
                if (!ok) return;
                for (int i = 0; i < ar; ++i) {
                    if (u[t[i]] < 0) return;
                    img[i] = u[t[i]];
                }
                int x = p.fn(f, t), v = n.fn(f, img.data());
                if (u[x] < 0) {
                    u[x] = v;
                    changed = true;
                } else if (u[x] != v) {
                    ok = false;
                }
            });
        }
    }
    if (!ok) return std::nullopt;
    for (int v : u)
        if (v < 0) return std::nullopt;
    if (!is_homomorphism(p, n, u)) return std::nullopt;
    return u;
}

CheckReport check_coherence(const AbstractClass& cls, int bound) {
    Stopwatch sw;
    CheckReport rep;
    rep.check = "coherence";
    rep.bound = bound;
    auto inclusion = [](Mask inner, Mask outer) {
        std::vector<int> pos, map;
        for (int x : mask_elements(outer)) pos.push_back(x);
        for (int x : mask_elements(inner))
            map.push_back(static_cast<int>(std::find(pos.begin(), pos.end(), x) - pos.begin()));
        return map;
    };
    for (auto& n : cls.members(bound)) {
        const Structure& N = *n;
        std::vector<int> id(N.size());
        for (int i = 0; i < N.size(); ++i) id[i] = i;
        ++rep.configurations;
        if (!cls.strong(N, N, id)) {
            rep.fail(json{{"violation", "identity not strong"}, {"structure", structure_to_json(N)}});
            continue;
        }
        const auto& cs = cls.carriers(n);
        std::set<Mask> is_carrier(cs.begin(), cs.end());
        for (Mask s1 : cs) {
            Structure m1 = induced(N, s1);
            bool m1_strong = cls.strong(m1, N, mask_elements(s1));
            if (m1_strong && !is_embedding(m1, N, mask_elements(s1)))
                rep.fail(json{{"violation", "strong map is not an embedding"},
                              {"structure", structure_to_json(N)},
                              {"sub", mask_to_json(N, s1)}});
            for (Mask s0 : cs) {
                if ((s0 & ~s1) != 0) continue;
                ++rep.configurations;
                Structure m0 = induced(N, s0);
                bool outer = cls.strong(m0, N, mask_elements(s0));
                bool inner = cls.strong(m0, m1, inclusion(s0, s1));
                json where{{"structure", structure_to_json(N)},
                           {"M0", mask_to_json(N, s0)},
                           {"M1", mask_to_json(N, s1)}};
                if (outer && m1_strong && !inner) {
                    where["violation"] = "coherence";
                    rep.fail(where);
                }
                if (inner && m1_strong && !outer) {
                    where["violation"] = "composition";
                    rep.fail(where);
                }
            }
        }
    }
    rep.wall_ms = sw.ms();
    return rep;
}

}  // namespace sil
