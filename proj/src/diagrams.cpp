#include "sil/diagrams.hpp"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <set>

#include "sil/io.hpp"
#include "sil/parallel.hpp"

namespace sil {

namespace {

std::vector<int> after(const std::vector<int>& g, const std::vector<int>& f) {
    std::vector<int> h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = g[f[i]];
    return h;
}

const std::vector<std::vector<int>>& aut_generators(const AbstractClass& cls, const StructPtr& m) {
    static std::mutex mu;
    static std::map<const void*, std::vector<std::vector<int>>> cache;
    const auto& auts = cls.automorphisms_of(m);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(&auts);
        if (it != cache.end()) return it->second;
    }
    auto gens = generating_set(auts);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(&auts, std::move(gens)).first->second;
}

std::vector<std::vector<int>> strong_embeddings(const AbstractClass& cls, const Structure& m, const Structure& n) {
    std::vector<std::vector<int>> out;
    for_each_embedding(m, n, {}, [&](const std::vector<int>& f) {
        if (cls.strong(m, n, f)) out.push_back(f);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> inverse_on(const std::vector<int>& f, int n) {
    std::vector<int> inv(n, -1);
    for (std::size_t i = 0; i < f.size(); ++i) inv[f[i]] = static_cast<int>(i);
    return inv;
}

}  // namespace

StructPtr induced_ptr(const Structure& n, Mask s) { return std::make_shared<Structure>(induced(n, s)); }

std::vector<int> inclusion_map(Mask inner, Mask outer) {
    std::vector<int> map;
    int pos = 0;
    for (int x : mask_elements(outer)) {
        if (inner >> x & 1) map.push_back(pos);
        ++pos;
    }
    return map;
}

bool same_span(const Span& a, const Span& b) {
    auto eq = [](const StructPtr& x, const StructPtr& y) { return x == y || (x && y && *x == *y); };
    return eq(a.m0, b.m0) && eq(a.m1, b.m1) && eq(a.m2, b.m2) && a.f1 == b.f1 && a.f2 == b.f2;
}

bool commutes(const Amalgam& a) { return after(a.g1, a.span.f1) == after(a.g2, a.span.f2); }

Amalgam dual_diagram(const Amalgam& a) {
    Amalgam d;
    d.span = Span{a.span.m0, a.span.m2, a.span.m1, a.span.f2, a.span.f1};
    d.n = a.n;
    d.g1 = a.g2;
    d.g2 = a.g1;
    return d;
}

bool valid_amalgam(const AbstractClass& cls, const Amalgam& a) {
    const Span& s = a.span;
    return commutes(a) && cls.strong(*s.m0, *s.m1, s.f1) && cls.strong(*s.m0, *s.m2, s.f2) &&
           cls.strong(*s.m1, *a.n, a.g1) && cls.strong(*s.m2, *a.n, a.g2);
}

Square to_square(const Amalgam& a) {
    return Square{a.n.get(), image_mask(after(a.g1, a.span.f1)), image_mask(a.g1), image_mask(a.g2),
                  full_mask(a.n->size())};
}

Amalgam from_square(const Square& q) {
    Amalgam a;
    a.span.m0 = induced_ptr(*q.n, q.s0);
    a.span.m1 = induced_ptr(*q.n, q.s1);
    a.span.m2 = induced_ptr(*q.n, q.s2);
    a.span.f1 = inclusion_map(q.s0, q.s1);
    a.span.f2 = inclusion_map(q.s0, q.s2);
    a.n = induced_ptr(*q.n, q.s3);
    a.g1 = inclusion_map(q.s1, q.s3);
    a.g2 = inclusion_map(q.s2, q.s3);
    return a;
}

std::vector<Span> enumerate_spans(const AbstractClass& cls, int bound) {
    const auto& members = cls.members(bound);
    std::vector<Span> out;
    using Action = std::function<std::vector<int>(const std::vector<int>&)>;
    for (auto& m0 : members) {
        const auto& g0 = aut_generators(cls, m0);
        for (auto& m1 : members) {
            if (m1->size() < m0->size()) continue;
            auto e1 = strong_embeddings(cls, *m0, *m1);
            if (e1.empty()) continue;
            std::vector<Action> acts1;
            for (auto& a : aut_generators(cls, m1)) acts1.push_back([a](const std::vector<int>& f) { return after(a, f); });
            for (auto& a : g0) acts1.push_back([a](const std::vector<int>& f) { return after(f, a); });
            auto rep1 = orbit_representatives(e1, acts1);
            for (std::size_t i = 0; i < e1.size(); ++i) {
                if (rep1[i] != i) continue;
                const auto& f1 = e1[i];
                // Automorphisms of M0 induced by automorphisms of M1 fixing the image.
                std::set<std::vector<int>> h1;
                Mask img = image_mask(f1);
                auto inv = inverse_on(f1, m1->size());
                for (auto& a : cls.automorphisms_of(m1)) {
                    if (image_mask(after(a, f1)) != img) continue;
                    std::vector<int> a0(m0->size());
                    for (int x = 0; x < m0->size(); ++x) a0[x] = inv[a[f1[x]]];
                    h1.insert(a0);
                }
                auto h1gens = generating_set(std::vector<std::vector<int>>(h1.begin(), h1.end()));
                for (auto& m2 : members) {
                    if (m2->size() < m0->size()) continue;
                    auto e2 = strong_embeddings(cls, *m0, *m2);
                    if (e2.empty()) continue;
                    std::vector<Action> acts2;
                    for (auto& a : aut_generators(cls, m2))
                        acts2.push_back([a](const std::vector<int>& f) { return after(a, f); });
                    for (auto& a : h1gens) acts2.push_back([a](const std::vector<int>& f) { return after(f, a); });
                    auto rep2 = orbit_representatives(e2, acts2);
                    for (std::size_t j = 0; j < e2.size(); ++j)
                        if (rep2[j] == j) out.push_back(Span{m0, m1, m2, f1, e2[j]});
                }
            }
        }
    }
    return out;
}

int span_size(const AbstractClass& cls, const Span& s) {
    if (cls.has_pushout()) {
        auto po = cls.pushout(*s.m0, *s.m1, *s.m2, s.f1, s.f2);
        if (po) return cls.measure(*po->p);
    }
    return s.m1->size() + s.m2->size() - s.m0->size();
}

std::vector<Amalgam> enumerate_amalgams(const AbstractClass& cls, const Span& s, int max_codomain, bool all) {
    std::vector<Amalgam> out;
    for (auto& n : cls.members(max_codomain)) {
        if (n->size() < s.m1->size() || n->size() < s.m2->size()) continue;
        if (!all && n->vocab().relational() && n->size() > s.m1->size() + s.m2->size() - s.m0->size()) continue;
        Mask full = full_mask(n->size());
        const auto& auts = cls.automorphisms_of(n);
        for_each_embedding(*s.m1, *n, {}, [&](const std::vector<int>& g1) {
            if (!cls.strong(*s.m1, *n, g1)) return true;
            std::vector<const std::vector<int>*> stab;
            for (auto& a : auts) {
                auto h = after(a, g1);
                if (h < g1) return true;  // not the orbit representative
                if (h == g1) stab.push_back(&a);
            }
            std::vector<int> pre(s.m2->size(), -1);
            for (int x = 0; x < s.m0->size(); ++x) pre[s.f2[x]] = g1[s.f1[x]];
            std::set<std::vector<int>> seen;
            for_each_embedding(*s.m2, *n, pre, [&](const std::vector<int>& g2) {
                if (!cls.strong(*s.m2, *n, g2)) return true;
                if (!all && generated(*n, image_mask(g1) | image_mask(g2)) != full) return true;
                std::vector<int> best = g2;
                for (auto* a : stab) best = std::min(best, after(*a, g2));
                if (seen.insert(best).second) out.push_back(Amalgam{s, n, g1, best});
                return true;
            });
            return true;
        });
    }
    return out;
}

namespace {

struct Generated {
    Mask carrier;
    std::vector<int> colors;  // per element of the carrier, in order
};

Generated generated_part(const Amalgam& a) {
    const Structure& n = *a.n;
    Mask c = generated(n, image_mask(a.g1) | image_mask(a.g2));
    std::vector<int> tag1(n.size(), 0), tag2(n.size(), 0);
    for (std::size_t x = 0; x < a.g1.size(); ++x) tag1[a.g1[x]] = static_cast<int>(x) + 1;
    for (std::size_t y = 0; y < a.g2.size(); ++y) tag2[a.g2[y]] = static_cast<int>(y) + 1;
    Generated g{c, {}};
    int w = static_cast<int>(a.g1.size()) + 1;
    for (int x : mask_elements(c)) g.colors.push_back(tag1[x] || tag2[x] ? 1 + tag1[x] + w * tag2[x] : 0);
    return g;
}

}  // namespace

std::string generated_key(const Amalgam& a) {
    Generated g = generated_part(a);
    return canonical_key(induced(*a.n, g.carrier), &g.colors);
}

std::string diagram_key(const Square& q) {
    std::vector<int> colors;
    for (int x : mask_elements(q.s3))
        colors.push_back(static_cast<int>((q.s0 >> x & 1) | ((q.s1 >> x & 1) << 1) | ((q.s2 >> x & 1) << 2)));
    return canonical_key(induced(*q.n, q.s3), &colors);
}

std::string span_key(const Span& s) {
    const Vocabulary& v = s.m1->vocab();
    std::vector<std::pair<std::string, int>> rels = v.relations;
    for (auto& [name, ar] : v.functions) rels.emplace_back("graph:" + name, ar + 1);
    rels.emplace_back("link:", 2);
    auto voc = make_vocabulary(rels, {});
    int a = s.m1->size(), b = s.m2->size();
    Structure u(voc, a + b);
    auto copy = [&](const Structure& m, int off) {
        int r = 0;
        std::vector<int> t;
        for (; r < static_cast<int>(v.relations.size()); ++r) {
            int ar = v.relations[r].second;
            t.resize(ar);
            for_each_tuple(m.size(), ar, [&](const int* x) {
                if (!m.rel(r, x)) return;
                for (int i = 0; i < ar; ++i) t[i] = x[i] + off;
                u.set_rel(r, t.data(), true);
            });
        }
        for (int f = 0; f < static_cast<int>(v.functions.size()); ++f, ++r) {
            int ar = v.functions[f].second;
            t.resize(ar + 1);
            if (m.size() == 0) continue;
            for_each_tuple(m.size(), ar, [&](const int* x) {
                for (int i = 0; i < ar; ++i) t[i] = x[i] + off;
                t[ar] = m.fn(f, x) + off;
                u.set_rel(r, t.data(), true);
            });
        }
    };
    copy(*s.m1, 0);
    copy(*s.m2, a);
    int link = static_cast<int>(rels.size()) - 1;
    for (int x = 0; x < s.m0->size(); ++x) u.set_rel2(link, s.f1[x], a + s.f2[x], true);
    std::vector<int> colors(a + b, 1);
    for (int y = a; y < a + b; ++y) colors[y] = 2;
    return canonical_key(u, &colors);
}

json span_to_json(const Span& s) {
    return json{{"M0", structure_to_json(*s.m0)},
                {"M1", structure_to_json(*s.m1)},
                {"M2", structure_to_json(*s.m2)},
                {"f1", map_to_json(*s.m0, *s.m1, s.f1)},
                {"f2", map_to_json(*s.m0, *s.m2, s.f2)}};
}

json amalgam_to_json(const Amalgam& a) {
    json j = span_to_json(a.span);
    j["N"] = structure_to_json(*a.n);
    j["g1"] = map_to_json(*a.span.m1, *a.n, a.g1);
    j["g2"] = map_to_json(*a.span.m2, *a.n, a.g2);
    return j;
}

json square_to_json(const Square& q) {
    return json{{"N", structure_to_json(*q.n)},
                {"M0", mask_to_json(*q.n, q.s0)},
                {"M1", mask_to_json(*q.n, q.s1)},
                {"M2", mask_to_json(*q.n, q.s2)},
                {"M3", mask_to_json(*q.n, q.s3)}};
}

Amalgam amalgam_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ParseError("diagram: expected an object");
    VocabPtr voc;
    auto load = [&](const char* field) {
        if (!j.contains(field)) throw ParseError(std::string("diagram: missing field '") + field + "'");
        const json& v = j.at(field);
        Structure s = [&] {
            if (v.is_string()) {
                std::filesystem::path p(v.get<std::string>());
                if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                return read_structure_file(p.string(), voc);
            }
            return structure_from_json(v, std::string("diagram.") + field, voc);
        }();
        if (!voc) voc = s.vocab_ptr();
        return std::make_shared<Structure>(std::move(s));
    };
    auto load_map = [&](const char* field, const Structure& src, const Structure& tgt) {
        if (!j.contains(field) || !j.at(field).is_array())
            throw ParseError(std::string("diagram.") + field + ": expected a list of [source, target] pairs");
        auto position = [](const Structure& s, int label) {
            auto it = std::find(s.labels().begin(), s.labels().end(), label);
            return it == s.labels().end() ? -1 : static_cast<int>(it - s.labels().begin());
        };
        std::vector<int> map(src.size(), -1);
        std::size_t i = 0;
        for (auto& pair : j.at(field)) {
            std::string where = std::string("diagram.") + field + "[" + std::to_string(i++) + "]";
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
                throw ParseError(where + ": expected [source, target]");
            int a = position(src, pair[0].get<int>()), b = position(tgt, pair[1].get<int>());
            if (a < 0 || b < 0) throw ParseError(where + ": element not in the universe");
            if (map[a] >= 0) throw ParseError(where + ": element mapped twice");
            map[a] = b;
        }
        for (int v : map)
            if (v < 0) throw ParseError(std::string("diagram.") + field + ": map is not total");
        return map;
    };
    Amalgam a;
    a.span.m0 = load("M0");
    a.span.m1 = load("M1");
    a.span.m2 = load("M2");
    a.n = load("N");
    a.span.f1 = load_map("f1", *a.span.m0, *a.span.m1);
    a.span.f2 = load_map("f2", *a.span.m0, *a.span.m2);
    a.g1 = load_map("g1", *a.span.m1, *a.n);
    a.g2 = load_map("g2", *a.span.m2, *a.n);
    const char* names[] = {"f1", "f2", "g1", "g2"};
    const Structure* src[] = {a.span.m0.get(), a.span.m0.get(), a.span.m1.get(), a.span.m2.get()};
    const Structure* tgt[] = {a.span.m1.get(), a.span.m2.get(), a.n.get(), a.n.get()};
    const std::vector<int>* maps[] = {&a.span.f1, &a.span.f2, &a.g1, &a.g2};
    for (int k = 0; k < 4; ++k)
        if (!is_embedding(*src[k], *tgt[k], *maps[k]))
            throw ParseError(std::string("diagram.") + names[k] + ": not an embedding");
    if (!commutes(a)) throw ParseError("diagram: square does not commute (g1.f1 != g2.f2)");
    return a;
}

Equivalence amalgams_equivalent(const AbstractClass& cls, const Amalgam& a, const Amalgam& b,
                                const SearchBudget& budget) {
    if (!same_span(a.span, b.span)) throw SpanMismatch("amalgams over different spans");
    Equivalence e;
    if ((a.n == b.n || *a.n == *b.n) && a.g1 == b.g1 && a.g2 == b.g2) {
        e.verdict = TriBool::Holds;
        e.witness = json{{"via", "identity"}};
        return e;
    }
    Generated ga = generated_part(a), gb = generated_part(b);
    Structure ca = induced(*a.n, ga.carrier), cb = induced(*b.n, gb.carrier);
    if (canonical_key(ca, &ga.colors) != canonical_key(cb, &gb.colors)) {
        // Any cocone restricts to an isomorphism of the generated parts over
        // the legs, so no chain of cocones can exist.
        e.verdict = TriBool::Fails;
        e.note = "generated sub-amalgams are not isomorphic over the span";
        e.witness = json{{"generated_a", structure_to_json(ca)}, {"generated_b", structure_to_json(cb)}};
        return e;
    }
    int maxc = budget.max_codomain ? budget.max_codomain
                                   : cls.joint_measure(cls.measure(*a.n), cls.measure(*b.n));
    // Cocone over the shared generated part, glued by the class pushout.
    std::vector<int> phi(a.n->size(), -1);
    for (std::size_t x = 0; x < a.g1.size(); ++x) phi[a.g1[x]] = b.g1[x];
    for (std::size_t y = 0; y < a.g2.size(); ++y) phi[a.g2[y]] = b.g2[y];
    auto in_a = mask_elements(ga.carrier);
    std::vector<int> pre(ca.size(), -1);
    for (std::size_t i = 0; i < in_a.size(); ++i) {
        int t = phi[in_a[i]];
        if (t < 0) continue;
        auto in_b = mask_elements(gb.carrier);
        pre[i] = static_cast<int>(std::find(in_b.begin(), in_b.end(), t) - in_b.begin());
    }
    auto iso = first_embedding(ca, cb, pre);
    auto inc_a = mask_elements(ga.carrier), inc_b = mask_elements(gb.carrier);
    bool members_ok = iso && cls.member(ca) && cls.strong(ca, *a.n, inc_a) && cls.strong(cb, *b.n, inc_b);
    if (budget.max_depth >= 2 && members_ok) {
        e.verdict = TriBool::Holds;
        e.witness = json{{"via", "generated sub-amalgam"}, {"generated", structure_to_json(ca)}};
        return e;
    }
    if (iso && cls.has_pushout()) {
        std::vector<int> to_b = after(inc_b, *iso);
        auto po = cls.pushout(ca, *a.n, *b.n, inc_a, to_b);
        if (po && po->in_class && cls.member(*po->p) && cls.measure(*po->p) <= maxc &&
            cls.strong(*a.n, *po->p, po->leg1) && cls.strong(*b.n, *po->p, po->leg2)) {
            e.verdict = TriBool::Holds;
            e.witness = json{{"via", "pushout"},
                             {"N*", structure_to_json(*po->p)},
                             {"ha", map_to_json(*a.n, *po->p, po->leg1)},
                             {"hb", map_to_json(*b.n, *po->p, po->leg2)}};
            return e;
        }
    }
    for (auto& star : cls.members(maxc)) {
        bool found = false;
        for_each_embedding(*a.n, *star, {}, [&](const std::vector<int>& ha) {
            if (!cls.strong(*a.n, *star, ha)) return true;
            std::vector<int> pb(b.n->size(), -1);
            for (std::size_t x = 0; x < a.g1.size(); ++x) pb[b.g1[x]] = ha[a.g1[x]];
            for (std::size_t y = 0; y < a.g2.size(); ++y) pb[b.g2[y]] = ha[a.g2[y]];
            for_each_embedding(*b.n, *star, pb, [&](const std::vector<int>& hb) {
                if (!cls.strong(*b.n, *star, hb)) return true;
                e.witness = json{{"via", "search"},
                                 {"N*", structure_to_json(*star)},
                                 {"ha", map_to_json(*a.n, *star, ha)},
                                 {"hb", map_to_json(*b.n, *star, hb)}};
                found = true;
                return false;
            });
            return !found;
        });
        if (found) {
            e.verdict = TriBool::Holds;
            return e;
        }
    }
    int joint = cls.joint_measure(cls.measure(*a.n), cls.measure(*b.n));
    if (cls.hereditary() && maxc >= joint && budget.max_depth <= 1) {
        e.verdict = TriBool::Fails;
        e.note = "no cocone up to the joint measure";
    } else {
        e.verdict = TriBool::Inconclusive;
        e.note = "no cocone found within max codomain " + std::to_string(maxc);
    }
    return e;
}

Atlas::Atlas(const AbstractClass& cls, int bound, const SearchBudget& budget) : cls_(&cls), bound_(bound) {
    auto spans = enumerate_spans(cls, bound);
    spans_.resize(spans.size());
    parallel_for(spans.size(), [&](std::size_t i) {
        SpanEntry& e = spans_[i];
        e.span = spans[i];
        e.size = span_size(cls, e.span);
        e.amalgams = enumerate_amalgams(cls, e.span, bound, true);
        std::map<std::string, std::vector<int>> groups;
        std::vector<std::string> order;
        for (std::size_t k = 0; k < e.amalgams.size(); ++k) {
            auto key = generated_key(e.amalgams[k]);
            if (!groups.count(key)) order.push_back(key);
            groups[key].push_back(static_cast<int>(k));
        }
        e.component.assign(e.amalgams.size(), -1);
        // Classes in order of first appearance.
        std::vector<std::pair<int, int>> firsts;
        for (auto& key : order) firsts.emplace_back(groups[key].front(), 0);
        std::sort(firsts.begin(), firsts.end());
        std::map<int, std::string> key_of_first;
        for (auto& key : order) key_of_first[groups[key].front()] = key;
        for (auto& [first, unused] : firsts) {
            auto& members = groups[key_of_first[first]];
            int id = e.components++;
            e.component[members[0]] = id;
            for (std::size_t m = 1; m < members.size(); ++m) {
                auto eq = amalgams_equivalent(cls, e.amalgams[members[0]], e.amalgams[members[m]], budget);
                if (eq.verdict == TriBool::Holds) {
                    e.component[members[m]] = id;
                } else {
                    if (eq.verdict == TriBool::Inconclusive) {
                        e.conclusive = false;
                        e.notes.push_back(eq.note);
                    }
                    e.component[members[m]] = e.components++;
                }
            }
        }
    });
    for (std::size_t i = 0; i < spans_.size(); ++i)
        for (std::size_t k = 0; k < spans_[i].amalgams.size(); ++k)
            by_key_[diagram_key(to_square(spans_[i].amalgams[k]))].emplace_back(static_cast<int>(i),
                                                                               static_cast<int>(k));
}

std::optional<std::pair<int, int>> Atlas::find(const Square& q) const {
    auto it = by_key_.find(diagram_key(q));
    if (it == by_key_.end()) return std::nullopt;
    return it->second.front();
}

const std::vector<std::pair<int, int>>* Atlas::find_all(const Square& q) const {
    auto it = by_key_.find(diagram_key(q));
    return it == by_key_.end() ? nullptr : &it->second;
}

bool Atlas::inconclusive() const {
    for (auto& e : spans_)
        if (!e.conclusive) return true;
    return false;
}

}  // namespace sil
