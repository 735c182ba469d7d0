#include "sil/independence.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <map>
#include <mutex>
#include <set>

#include "sil/galois.hpp"
#include "sil/io.hpp"
#include "sil/parallel.hpp"

namespace sil {

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

namespace {

constexpr std::size_t kWitnessesPerSlot = 3;
constexpr std::size_t kWitnessesPerReport = 20;

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

Mask map_mask(const std::vector<int>& map, Mask m) {
    Mask out = 0;
    for (int x : mask_elements(m)) out |= Mask{1} << map[x];
    return out;
}

struct Slot {
    std::vector<json> bad;
    std::int64_t count = 0;
    std::set<std::string> unknown;
    void fail(json w) {
        if (bad.size() < kWitnessesPerSlot) bad.push_back(std::move(w));
        else failed_more = true;
    }
    bool failed_more = false;
};

void merge(CheckReport& rep, std::vector<Slot>& slots) {
    bool truncated = false;
    for (auto& s : slots) {
        rep.configurations += s.count;
        for (auto& w : s.bad) {
            if (rep.witnesses.size() < kWitnessesPerReport) rep.fail(std::move(w));
            else truncated = true;
        }
        truncated |= s.failed_more;
        for (auto& u : s.unknown) rep.inconclusive(u);
    }
    if (truncated) rep.notes.push_back("further witnesses omitted");
}

CheckReport start(const std::string& check, int bound) {
    CheckReport rep;
    rep.check = check;
    rep.bound = bound;
    return rep;
}

// Runs body(member, slot) on every member within the bound.
template <class F>
CheckReport sweep_members(const std::string& check, const AbstractClass& cls, int bound, F&& body) {
    Stopwatch sw;
    CheckReport rep = start(check, bound);
    const auto& ms = cls.members(bound);
    std::vector<Slot> slots(ms.size());
    std::atomic<bool> capped{false};
    parallel_for(ms.size(), [&](std::size_t i) {
        if (memory_cap_exceeded()) {
            capped = true;
            return;
        }
        body(ms[i], slots[i]);
    });
    merge(rep, slots);
    if (capped) rep.inconclusive("memory cap reached before the sweep finished");
    rep.wall_ms = sw.ms();
    return rep;
}

template <class F>
CheckReport sweep_spans(const std::string& check, const std::vector<Span>& spans, int bound, F&& body) {
    Stopwatch sw;
    CheckReport rep = start(check, bound);
    std::vector<Slot> slots(spans.size());
    std::atomic<bool> capped{false};
    parallel_for(spans.size(), [&](std::size_t i) {
        if (memory_cap_exceeded()) {
            capped = true;
            return;
        }
        body(i, slots[i]);
    });
    merge(rep, slots);
    if (capped) rep.inconclusive("memory cap reached before the sweep finished");
    rep.wall_ms = sw.ms();
    return rep;
}

json config_json(const Structure& n, std::initializer_list<std::pair<const char*, Mask>> parts) {
    json j{{"N", structure_to_json(n)}};
    for (auto& [name, m] : parts) j[name] = mask_to_json(n, m);
    return j;
}

bool dec(const Relation& r, const StructPtr& n, Mask s0, Mask s1, Mask s2, Mask s3) {
    return r.decide(Square{n.get(), s0, s1, s2, s3});
}

RelPtr oriented(const RelPtr& rel, Side side) { return side == Side::Left ? dual_relation(rel) : rel; }

std::string sided(const std::string& base, Side side) { return base + "-" + to_string(side); }

// Some amalgam of the span within the budget satisfies `ok`: the class
// pushout first, then every amalgam within the bound, then generated
// amalgams up to the joint measure.
TriBool exists_amalgam(const AbstractClass& cls, const Span& s, int bound,
                       const std::function<TriBool(const Amalgam&)>& ok) {
    bool unknown = false;
    auto test = [&](const Amalgam& a) {
        TriBool t = ok(a);
        unknown |= t == TriBool::Inconclusive;
        return t == TriBool::Holds;
    };
    if (cls.has_pushout()) {
        auto po = cls.pushout(*s.m0, *s.m1, *s.m2, s.f1, s.f2);
        if (po && po->in_class && test(Amalgam{s, po->p, po->leg1, po->leg2})) return TriBool::Holds;
    }
    for (auto& a : enumerate_amalgams(cls, s, bound, true))
        if (test(a)) return TriBool::Holds;
    int joint = cls.joint_measure(cls.measure(*s.m1), cls.measure(*s.m2));
    if (joint > bound)
        for (auto& a : enumerate_amalgams(cls, s, joint, false))
            if (test(a)) return TriBool::Holds;
    return unknown ? TriBool::Inconclusive : TriBool::Fails;
}

Mask base_image(const Amalgam& a) {
    Mask m = 0;
    for (int x : a.span.f1) m |= Mask{1} << a.g1[x];
    return m;
}

}  // namespace

const std::vector<Extension>& strong_extensions(const AbstractClass& cls, const StructPtr& n, int extra) {
    static std::mutex mu;
    static std::map<std::tuple<const AbstractClass*, const Structure*, int>,
                    std::pair<StructPtr, std::vector<Extension>>> cache;
    auto key = std::make_tuple(&cls, n.get(), extra);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second.second;
    }
    std::vector<Extension> out;
    if (extra > 0) {
        int limit = cls.measure(*n) + extra;
        for (auto& big : cls.members(limit)) {
            if (big->size() <= n->size()) continue;
            std::set<std::string> seen;
            for (auto& e : enumerate_embedding_maps(*n, *big)) {
                if (!cls.strong(*n, *big, e)) continue;
                std::vector<int> colors(big->size(), 0);
                for (std::size_t i = 0; i < e.size(); ++i) colors[e[i]] = static_cast<int>(i) + 1;
                if (seen.insert(canonical_key(*big, &colors)).second) out.push_back(Extension{big, e});
            }
        }
    }
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key];
    if (!slot.first) slot = {n, std::move(out)};
    return slot.second;
}

CheckReport check_closure_under_equiv(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget,
                                      const Atlas* atlas) {
    Stopwatch sw;
    std::optional<Atlas> own;
    if (!atlas) atlas = &own.emplace(cls, budget.bound, budget.search);
    const auto& entries = atlas->spans();
    std::vector<Span> spans;
    for (auto& e : entries) spans.push_back(e.span);
    auto rep = sweep_spans("closure", spans, budget.bound, [&](std::size_t i, Slot& slot) {
        const SpanEntry& e = entries[i];
        std::vector<char> d(e.amalgams.size());
        for (std::size_t k = 0; k < e.amalgams.size(); ++k) d[k] = rel->decide(to_square(e.amalgams[k]));
        slot.count += static_cast<std::int64_t>(e.amalgams.size());
        std::vector<int> yes(e.components, -1), no(e.components, -1);
        for (std::size_t k = 0; k < e.amalgams.size(); ++k) (d[k] ? yes : no)[e.component[k]] = static_cast<int>(k);
        bool mixed = false;
        for (int c = 0; c < e.components; ++c) {
            if (yes[c] >= 0 && no[c] >= 0)
                slot.fail(json{{"span", span_to_json(e.span)},
                               {"independent", amalgam_to_json(e.amalgams[yes[c]])},
                               {"equivalent_dependent", amalgam_to_json(e.amalgams[no[c]])}});
        }
        for (std::size_t k = 1; k < e.amalgams.size(); ++k) mixed |= d[k] != d[0];
        if (mixed && !e.conclusive) slot.unknown.insert("equivalence of some amalgams was not decided");
    });
    rep.wall_ms = sw.ms();
    return rep;
}

CheckReport check_existence(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    auto spans = enumerate_spans(cls, budget.bound);
    return sweep_spans("existence", spans, budget.bound, [&](std::size_t i, Slot& slot) {
        ++slot.count;
        TriBool t = exists_amalgam(cls, spans[i], budget.bound,
                                   [&](const Amalgam& a) { return tri(rel->decide(to_square(a))); });
        if (t == TriBool::Fails) slot.fail(json{{"span", span_to_json(spans[i])}});
    });
}

CheckReport check_uniqueness(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget,
                             const Atlas* atlas) {
    Stopwatch sw;
    std::optional<Atlas> own;
    if (!atlas) atlas = &own.emplace(cls, budget.bound, budget.search);
    const auto& entries = atlas->spans();
    std::vector<Span> spans;
    for (auto& e : entries) spans.push_back(e.span);
    auto rep = sweep_spans("uniqueness", spans, budget.bound, [&](std::size_t i, Slot& slot) {
        const SpanEntry& e = entries[i];
        int first = -1;
        std::set<int> compared;
        for (std::size_t k = 0; k < e.amalgams.size(); ++k) {
            if (!rel->decide(to_square(e.amalgams[k]))) continue;
            ++slot.count;
            if (first < 0) {
                first = static_cast<int>(k);
                compared.insert(e.component[k]);
                continue;
            }
            if (!compared.insert(e.component[k]).second) continue;
            auto eq = amalgams_equivalent(cls, e.amalgams[first], e.amalgams[k], budget.search);
            if (eq.verdict == TriBool::Fails)
                slot.fail(json{{"span", span_to_json(e.span)},
                               {"amalgams", {amalgam_to_json(e.amalgams[first]), amalgam_to_json(e.amalgams[k])}}});
            else if (eq.verdict == TriBool::Inconclusive)
                slot.unknown.insert("equivalence undecided: " + eq.note);
        }
    });
    rep.wall_ms = sw.ms();
    return rep;
}

CheckReport check_transitivity(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget, Side side) {
    RelPtr r = oriented(rel, side);
    return sweep_members(sided("transitivity", side), cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                for (Mask s2 : cs) {
                    if (!subset(s0, s2)) continue;
                    for (Mask s3 : cs) {
                        if (!subset(s1 | s2, s3) || !dec(*r, n, s0, s1, s2, s3)) continue;
                        for (Mask s4 : cs) {
                            if (!subset(s2, s4) || !dec(*r, n, s2, s3, s4, full)) continue;
                            ++slot.count;
                            if (!dec(*r, n, s0, s1, s4, full))
                                slot.fail(config_json(*n, {{"M0", s0}, {"M1", s1}, {"M2", s2}, {"M3", s3},
                                                           {"M4", s4}, {"M5", full}}));
                        }
                    }
                }
            }
    });
}

CheckReport check_monotonicity(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget, Side side) {
    RelPtr r = oriented(rel, side);
    return sweep_members(sided("monotonicity", side), cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                for (Mask s2 : cs) {
                    if (!subset(s0, s2)) continue;
                    for (Mask s3 : cs) {
                        if (!subset(s2, s3)) continue;
                        // (M0, M1, M3, N) independent, M2 between M0 and M3.
                        if (dec(*r, n, s0, s1, s3, full)) {
                            ++slot.count;
                            if (!dec(*r, n, s0, s1, s2, full))
                                slot.fail(json{{"kind", "monotonicity"},
                                               {"configuration", config_json(*n, {{"M0", s0}, {"M1", s1}, {"M2", s2},
                                                                                  {"M3", s3}, {"M4", full}})}});
                        }
                        // Descent: s3 plays the corner over M1 and M2, s4 the long side.
                        if (!subset(s1, s3)) continue;
                        for (Mask s4 : cs) {
                            if (!subset(s2, s4) || !dec(*r, n, s0, s1, s4, full)) continue;
                            ++slot.count;
                            if (!dec(*r, n, s0, s1, s2, s3))
                                slot.fail(json{{"kind", "descent"},
                                               {"configuration", config_json(*n, {{"M0", s0}, {"M1", s1}, {"M2", s2},
                                                                                  {"M3", s3}, {"M4", s4},
                                                                                  {"M5", full}})}});
                        }
                    }
                }
            }
    });
}

CheckReport check_base_monotonicity(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget,
                                    Side side) {
    RelPtr r = oriented(rel, side);
    return sweep_members(sided("base-monotonicity", side), cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        std::int64_t open = 0;
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                for (Mask s2 : cs) {
                    if (!subset(s0, s2)) continue;
                    for (Mask s3 : cs) {
                        if (!subset(s2, s3) || !dec(*r, n, s0, s1, s3, full)) continue;
                        ++slot.count;
                        // Need M1' over M1 and M2 with (M2, M1', M3, M4') independent.
                        bool found = false;
                        for (Mask t : cs)
                            if (subset(s1 | s2, t) && dec(*r, n, s2, t, s3, full)) {
                                found = true;
                                break;
                            }
                        for (auto& ext : strong_extensions(cls, n, found ? 0 : budget.extension)) {
                            if (found) break;
                            Mask need = map_mask(ext.map, s1 | s2), b = map_mask(ext.map, s2),
                                 c = map_mask(ext.map, s3), f = full_mask(ext.n->size());
                            for (Mask t : cls.carriers(ext.n))
                                if (subset(need, t) && dec(*r, ext.n, b, t, c, f)) {
                                    found = true;
                                    break;
                                }
                        }
                        if (!found) ++open;
                    }
                }
            }
        if (open)
            slot.unknown.insert("no enlarged side found within the extension budget for some configurations");
    });
}

CheckReport check_symmetry(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    return sweep_members("symmetry", cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                for (Mask s2 : cs) {
                    if (s2 < s1 || !subset(s0, s2)) continue;
                    ++slot.count;
                    if (dec(*rel, n, s0, s1, s2, full) != dec(*rel, n, s0, s2, s1, full))
                        slot.fail(config_json(*n, {{"M0", s0}, {"M1", s1}, {"M2", s2}, {"M3", full}}));
                }
            }
    });
}

CheckReport check_isomorphism_lemma(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    return sweep_members("isomorphism-lemma", cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        for (Mask s0 : cs)
            for (Mask s2 : cs) {
                if (!subset(s0, s2)) continue;
                slot.count += 2;
                if (!dec(*rel, n, s0, s0, s2, full))
                    slot.fail(config_json(*n, {{"M0", s0}, {"M1", s0}, {"M2", s2}, {"M3", full}}));
                if (!dec(*rel, n, s0, s2, s0, full))
                    slot.fail(config_json(*n, {{"M0", s0}, {"M1", s2}, {"M2", s0}, {"M3", full}}));
            }
    });
}

CheckReport check_knf_category(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    Stopwatch sw;
    auto ids = sweep_members("knf", cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        // The identity on an object f: M0 -> M1 is the square with f on both sides.
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                ++slot.count;
                if (!dec(*rel, n, s0, s1, s0, s1))
                    slot.fail(json{{"kind", "identity"},
                                   {"configuration", config_json(*n, {{"M0", s0}, {"M1", s1}, {"M2", s0}, {"M3", s1}})}});
            }
    });
    // Composition of arrows is horizontal pasting of squares.
    auto comp = check_transitivity(rel, cls, budget, Side::Right);
    for (auto& w : comp.witnesses) w = json{{"kind", "composition"}, {"configuration", w}};
    ids.absorb(comp);
    ids.wall_ms = sw.ms();
    return ids;
}

TriBool nfbar_search(const Relation& rel, const AbstractClass& cls, const StructPtr& n, Mask m0, Mask a, Mask b,
                     int extension) {
    const auto& cs = cls.carriers(n);
    Mask full = full_mask(n->size());
    for (Mask s1 : cs) {
        if (!subset(a | m0, s1)) continue;
        for (Mask s2 : cs)
            if (subset(b | m0, s2) && dec(rel, n, m0, s1, s2, full)) return TriBool::Holds;
    }
    for (auto& ext : strong_extensions(cls, n, extension)) {
        Mask e0 = map_mask(ext.map, m0), ea = map_mask(ext.map, a | m0), eb = map_mask(ext.map, b | m0);
        Mask f = full_mask(ext.n->size());
        const auto& xs = cls.carriers(ext.n);
        for (Mask s1 : xs) {
            if (!subset(ea, s1)) continue;
            for (Mask s2 : xs)
                if (subset(eb, s2) && dec(rel, ext.n, e0, s1, s2, f)) return TriBool::Holds;
        }
    }
    return TriBool::Fails;
}

TriBool nfbar(const Relation& rel, const AbstractClass& cls, const StructPtr& n, Mask m0, Mask a, Mask b,
              int extension) {
    if (rel.has_direct()) return tri(rel.direct_nonfork(*n, m0, a, b));
    return nfbar_search(rel, cls, n, m0, a, b, extension);
}

namespace {

// NF-bar over (carrier index, A, B) for one member.
struct NfTable {
    StructPtr n;
    std::vector<Mask> carriers;
    std::map<Mask, int> index;
    std::vector<TriBool> v;
    int bits = 0;
    TriBool at(Mask m0, Mask a, Mask b) const {
        return v[(static_cast<std::size_t>(index.at(m0)) << (2 * bits)) | (a << bits) | b];
    }
};

NfTable make_table(const Relation& rel, const AbstractClass& cls, const StructPtr& n, int extension) {
    NfTable t;
    t.n = n;
    t.carriers = cls.carriers(n);
    for (std::size_t i = 0; i < t.carriers.size(); ++i) t.index[t.carriers[i]] = static_cast<int>(i);
    t.bits = n->size();
    std::size_t side = std::size_t{1} << t.bits;
    t.v.resize(t.carriers.size() * side * side);
    for (std::size_t c = 0; c < t.carriers.size(); ++c)
        for (Mask a = 0; a < side; ++a)
            for (Mask b = 0; b < side; ++b)
                t.v[(c << (2 * t.bits)) | (a << t.bits) | b] = nfbar(rel, cls, n, t.carriers[c], a, b, extension);
    return t;
}

json nf_json(const Structure& n, Mask m0, Mask a, Mask b) {
    return json{{"N", structure_to_json(n)}, {"M0", mask_to_json(n, m0)}, {"A", mask_to_json(n, a)},
                {"B", mask_to_json(n, b)}};
}

// Records an implication premise => conclusion.
void implies(Slot& slot, TriBool premise, TriBool conclusion, const std::function<json()>& witness) {
    if (premise != TriBool::Holds) {
        if (premise == TriBool::Inconclusive) slot.unknown.insert("NF-bar undecided on a premise");
        return;
    }
    ++slot.count;
    if (conclusion == TriBool::Fails) slot.fail(witness());
    else if (conclusion == TriBool::Inconclusive) slot.unknown.insert("NF-bar undecided on a conclusion");
}

void agrees(Slot& slot, TriBool x, TriBool y, const std::function<json()>& witness) {
    ++slot.count;
    if (x == TriBool::Inconclusive || y == TriBool::Inconclusive) slot.unknown.insert("NF-bar undecided");
    else if (x != y) slot.fail(witness());
}

std::vector<std::vector<int>> small_tuples(int n, int max_len) {
    std::vector<std::vector<int>> out;
    if (n == 0) return out;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<int> t(len, 0);
        while (true) {
            out.push_back(t);
            int i = len - 1;
            while (i >= 0 && ++t[i] == n) t[i--] = 0;
            if (i < 0) break;
        }
    }
    return out;
}

Mask tuple_mask(const std::vector<int>& t) {
    Mask m = 0;
    for (int x : t) m |= Mask{1} << x;
    return m;
}

}  // namespace

ReportBundle nfbar_laws(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    ReportBundle out;
    out.title = "nfbar-laws";
    const auto& ms = cls.members(budget.bound);
    std::vector<NfTable> tables(ms.size());
    std::map<const Structure*, int> where;
    for (std::size_t i = 0; i < ms.size(); ++i) where[ms[i].get()] = static_cast<int>(i);
    parallel_for(ms.size(), [&](std::size_t i) { tables[i] = make_table(*rel, cls, ms[i], budget.extension); });

    auto per_member = [&](const std::string& law, auto&& body) {
        auto rep = sweep_members(law, cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
            body(tables[where.at(n.get())], slot);
        });
        out.reports.push_back(std::move(rep));
    };

    per_member("preservation", [&](const NfTable& t, Slot& slot) {
        const Structure& n = *t.n;
        int room = budget.bound - cls.measure(n);
        std::size_t side = std::size_t{1} << t.bits;
        for (auto& ext : strong_extensions(cls, t.n, room)) {
            auto it = where.find(ext.n.get());
            if (it == where.end()) continue;
            const NfTable& u = tables[it->second];
            for (Mask m0 : t.carriers)
                for (Mask a = 0; a < side; ++a)
                    for (Mask b = 0; b < side; ++b) {
                        Mask e0 = map_mask(ext.map, m0), ea = map_mask(ext.map, a), eb = map_mask(ext.map, b);
                        agrees(slot, t.at(m0, a, b), u.at(e0, ea, eb), [&] {
                            return json{{"small", nf_json(n, m0, a, b)}, {"large", nf_json(*ext.n, e0, ea, eb)}};
                        });
                    }
        }
    });

    per_member("monotonicity", [&](const NfTable& t, Slot& slot) {
        std::size_t side = std::size_t{1} << t.bits;
        for (Mask m0 : t.carriers)
            for (Mask a = 0; a < side; ++a)
                for (Mask b = 0; b < side; ++b) {
                    TriBool p = t.at(m0, a, b);
                    for (int x : mask_elements(a))
                        implies(slot, p, t.at(m0, a & ~(Mask{1} << x), b), [&] { return nf_json(*t.n, m0, a, b); });
                    for (int x : mask_elements(b))
                        implies(slot, p, t.at(m0, a, b & ~(Mask{1} << x)), [&] { return nf_json(*t.n, m0, a, b); });
                }
    });

    per_member("normality", [&](const NfTable& t, Slot& slot) {
        std::size_t side = std::size_t{1} << t.bits;
        for (Mask m0 : t.carriers)
            for (Mask a = 0; a < side; ++a)
                for (Mask b = 0; b < side; ++b)
                    agrees(slot, t.at(m0, a, b), t.at(m0, a | m0, b | m0), [&] { return nf_json(*t.n, m0, a, b); });
    });

    per_member("base-monotonicity", [&](const NfTable& t, Slot& slot) {
        std::size_t side = std::size_t{1} << t.bits;
        for (Mask m0 : t.carriers)
            for (Mask m2 : t.carriers) {
                if (!subset(m0, m2)) continue;
                for (Mask a = 0; a < side; ++a)
                    for (Mask b = 0; b < side; ++b) {
                        if (!subset(m2, b)) continue;
                        implies(slot, t.at(m0, a, b), t.at(m2, a, b), [&] {
                            json j = nf_json(*t.n, m0, a, b);
                            j["M2"] = mask_to_json(*t.n, m2);
                            return j;
                        });
                    }
            }
    });

    {
        // Extension: every span (M -> M', M -> N) has an amalgam where the
        // image of M' does not fork from N over M.
        auto spans = enumerate_spans(cls, budget.bound);
        out.reports.push_back(sweep_spans("extension", spans, budget.bound, [&](std::size_t i, Slot& slot) {
            ++slot.count;
            TriBool t = exists_amalgam(cls, spans[i], budget.bound, [&](const Amalgam& a) {
                return nfbar(*rel, cls, a.n, base_image(a), image_mask(a.g1), image_mask(a.g2), budget.extension);
            });
            if (t == TriBool::Fails) slot.fail(json{{"span", span_to_json(spans[i])}});
            else if (t == TriBool::Inconclusive) slot.unknown.insert("NF-bar undecided on every candidate amalgam");
        }));
    }

    per_member("symmetry", [&](const NfTable& t, Slot& slot) {
        std::size_t side = std::size_t{1} << t.bits;
        for (Mask m0 : t.carriers)
            for (Mask a = 0; a < side; ++a)
                for (Mask b = a; b < side; ++b)
                    agrees(slot, t.at(m0, a, b), t.at(m0, b, a), [&] { return nf_json(*t.n, m0, a, b); });
    });

    per_member("uniqueness", [&](const NfTable& t, Slot& slot) {
        if (!cls.types_complete()) {
            slot.unknown.insert("Galois types are not certified for this class");
            return;
        }
        const Structure& n = *t.n;
        std::size_t side = std::size_t{1} << t.bits;
        auto tuples = small_tuples(n.size(), 2);
        for (Mask m : t.carriers) {
            std::vector<std::string> over_m;
            for (auto& a : tuples) over_m.push_back(type_key(cls, n, mask_elements(m), a));
            for (Mask b = 0; b < side; ++b) {
                if (!subset(m, b)) continue;
                std::vector<int> free;
                for (std::size_t i = 0; i < tuples.size(); ++i)
                    if (t.at(m, tuple_mask(tuples[i]), b) == TriBool::Holds) free.push_back(static_cast<int>(i));
                std::map<std::string, std::string> seen;  // type over M -> type over B
                for (int i : free) {
                    auto key_b = type_key(cls, n, mask_elements(b), tuples[i]);
                    ++slot.count;
                    auto [it, fresh] = seen.emplace(over_m[i], key_b);
                    if (!fresh && it->second != key_b) {
                        json j = nf_json(n, m, tuple_mask(tuples[i]), b);
                        j["tuple"] = tuples[i];
                        slot.fail(j);
                    }
                }
            }
        }
    });

    per_member("transitivity", [&](const NfTable& t, Slot& slot) {
        std::size_t side = std::size_t{1} << t.bits;
        for (Mask m0 : t.carriers)
            for (Mask m2 : t.carriers) {
                if (!subset(m0, m2)) continue;
                for (Mask a = 0; a < side; ++a) {
                    if (t.at(m0, a, m2) != TriBool::Holds) continue;
                    for (Mask b = 0; b < side; ++b)
                        implies(slot, t.at(m2, a, b), t.at(m0, a, b), [&] {
                            json j = nf_json(*t.n, m0, a, b);
                            j["M2"] = mask_to_json(*t.n, m2);
                            return j;
                        });
                }
            }
    });
    return out;
}

CheckReport check_nfbar_laws(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    Stopwatch sw;
    auto bundle = nfbar_laws(rel, cls, budget);
    CheckReport rep = start("nfbar-laws", budget.bound);
    for (auto& r : bundle.reports) {
        for (auto& w : r.witnesses) w = json{{"law", r.check}, {"configuration", w}};
        rep.absorb(r);
    }
    rep.wall_ms = sw.ms();
    return rep;
}

CheckReport check_witness(const RelPtr& rel, const AbstractClass& cls, int theta, const CheckBudget& budget,
                          Side side) {
    RelPtr r = oriented(rel, side);
    auto rep = sweep_members(sided("witness", side), cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                for (Mask s2 : cs) {
                    if (!subset(s0, s2) || dec(*r, n, s0, s1, s2, full)) continue;
                    ++slot.count;
                    bool found = false, unknown = false;
                    for (Mask a = s2;; a = (a - 1) & s2) {
                        if (std::popcount(a) < theta) {
                            TriBool t = nfbar(*r, cls, n, s0, s1, a, budget.extension);
                            if (t == TriBool::Fails) {
                                found = true;
                                break;
                            }
                            unknown |= t == TriBool::Inconclusive;
                        }
                        if (a == 0) break;
                    }
                    if (found) continue;
                    if (unknown) slot.unknown.insert("NF-bar undecided on a small subset");
                    else slot.fail(config_json(*n, {{"M0", s0}, {"M1", s1}, {"M2", s2}, {"M3", full}}));
                }
            }
    });
    rep.notes.insert(rep.notes.begin(), "theta = " + std::to_string(theta));
    return rep;
}

LambdaFn parse_lambda(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty lambda");
    long coef = 0, add = 0;
    std::size_t i = 0;
    bool any = false;
    int sign = 1;
    while (i < s.size()) {
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (any) {
            throw std::invalid_argument("bad lambda '" + text + "'");
        }
        long num = 1;
        bool has_num = false;
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) {
            num = std::stol(s.substr(i, j - i));
            has_num = true;
            i = j;
        }
        if (i < s.size() && s[i] == '*') ++i;
        if (i < s.size() && s[i] == 'a') {
            ++i;
            if (i < s.size() && s[i] == '*') {
                std::size_t k = ++i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == i) throw std::invalid_argument("bad lambda '" + text + "'");
                num *= std::stol(s.substr(i, k - i));
                i = k;
            }
            coef += sign * num;
        } else {
            if (!has_num) throw std::invalid_argument("bad lambda '" + text + "'");
            add += sign * num;
        }
        any = true;
        sign = 1;
    }
    return [coef, add](int a) { return static_cast<int>(std::max(0L, coef * a + add)); };
}

CheckReport check_local_character(const RelPtr& rel, const AbstractClass& cls, const LambdaFn& lambda,
                                  const CheckBudget& budget, Side side) {
    RelPtr r = oriented(rel, side);
    return sweep_members(sided("local-character", side), cls, budget.bound, [&](const StructPtr& n, Slot& slot) {
        const auto& cs = cls.carriers(n);
        std::map<Mask, int> measure;
        for (Mask c : cs) measure[c] = cls.measure(induced(*n, c));
        for (Mask m : cs)
            for (Mask n1 : cs) {
                ++slot.count;
                int alpha = measure[n1], lam = lambda(alpha);
                bool found = false, unknown = false;
                for (Mask m0 : cs) {
                    if (!subset(m0, m) || measure[m0] > lam) continue;
                    TriBool t = nfbar(*r, cls, n, m0, n1, m, budget.extension);
                    if (t == TriBool::Holds) {
                        found = true;
                        break;
                    }
                    unknown |= t == TriBool::Inconclusive;
                }
                if (found) continue;
                if (unknown) {
                    slot.unknown.insert("NF-bar undecided for some small base");
                } else {
                    json w = config_json(*n, {{"M", m}, {"N1", n1}});
                    w["alpha"] = alpha;
                    w["lambda"] = lam;
                    slot.fail(w);
                }
            }
    });
}

}  // namespace sil
