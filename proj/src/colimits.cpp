#include "sil/colimits.hpp"

#include <set>

#include "sil/io.hpp"
#include "sil/parallel.hpp"

namespace sil {

std::optional<std::vector<int>> PushoutResult::mediator(const Amalgam& competitor) const {
    if (!same_span(cocone.span, competitor.span)) throw SpanMismatch("competitor over a different span");
    return mediating_map(Pushout{cocone.n, cocone.g1, cocone.g2, in_class}, *competitor.n, competitor.g1,
                         competitor.g2);
}

PushoutResult pushout(const AbstractClass& cls, const Span& s) {
    if (!cls.has_pushout()) throw UnsupportedOperation("class '" + cls.name() + "' has no pushout construction");
    auto po = cls.pushout(*s.m0, *s.m1, *s.m2, s.f1, s.f2);
    if (!po) throw UnsupportedOperation("pushout not available for this span");
    PushoutResult r;
    r.cocone = Amalgam{s, po->p, po->leg1, po->leg2};
    r.in_class = po->in_class;
    return r;
}

PullbackResult pullback(const Structure& n, const StructPtr& m1, const std::vector<int>& g1, const StructPtr& m2,
                        const std::vector<int>& g2) {
    if (!(m1->vocab() == n.vocab()) || !(m2->vocab() == n.vocab()))
        throw VocabularyMismatch("pullback: vocabularies differ");
    Mask common = image_mask(g1) & image_mask(g2);
    std::vector<int> inv1(n.size(), -1), inv2(n.size(), -1);
    for (std::size_t i = 0; i < g1.size(); ++i) inv1[g1[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < g2.size(); ++i) inv2[g2[i]] = static_cast<int>(i);
    PullbackResult r;
    r.image = common;
    r.span.m0 = induced_ptr(n, common);
    r.span.m1 = m1;
    r.span.m2 = m2;
    for (int x : mask_elements(common)) {
        r.span.f1.push_back(inv1[x]);
        r.span.f2.push_back(inv2[x]);
    }
    return r;
}

TriBool is_regular_mono(const AbstractClass& cls, const Structure& src, const Structure& tgt,
                        const std::vector<int>& map) {
    return cls.regular_mono(src, tgt, map);
}

bool is_pullback_square(const Square& q) { return (q.s1 & q.s2) == q.s0; }
bool is_pullback_square(const Amalgam& a) { return is_pullback_square(to_square(a)); }

TriBool EffectiveSquareVerdict::verdict() const {
    if (!is_pullback) return TriBool::Fails;
    return induced_map_regular;
}

EffectiveSquareVerdict is_effective_square(const AbstractClass& cls, const Amalgam& a) {
    if (!cls.has_pushout()) throw UnsupportedOperation("class '" + cls.name() + "' has no pushout construction");
    EffectiveSquareVerdict v;
    v.is_pullback = is_pullback_square(a);
    const Span& s = a.span;
    auto po = cls.pushout(*s.m0, *s.m1, *s.m2, s.f1, s.f2);
    if (!po) throw UnsupportedOperation("pushout not available for this span");
    auto u = mediating_map(*po, *a.n, a.g1, a.g2);
    if (!u) {
        v.induced_map_regular = TriBool::Inconclusive;
        return v;
    }
    v.induced_map_regular = cls.regular_mono(*po->p, *a.n, *u);
    if (v.induced_map_regular == TriBool::Fails)
        v.witness = json{{"pushout", structure_to_json(*po->p)}, {"induced_map", map_to_json(*po->p, *a.n, *u)}};
    return v;
}

EffectiveSquareVerdict is_effective_square(const AbstractClass& cls, const Square& q) {
    return is_effective_square(cls, from_square(q));
}

CheckReport verify_ringel(const AbstractClass& cls, int bound) {
    Stopwatch sw;
    CheckReport rep;
    rep.check = "ringel";
    rep.bound = bound;
    if (!cls.has_pushout()) {
        rep.inconclusive("class has no pushout construction");
        return rep;
    }
    auto spans = enumerate_spans(cls, bound);
    std::vector<std::optional<json>> bad(spans.size());
    std::vector<char> counted(spans.size(), 0), unknown(spans.size(), 0), skipped(spans.size(), 0);
    parallel_for(spans.size(), [&](std::size_t i) {
        const Span& s = spans[i];
        if (cls.regular_mono(*s.m0, *s.m1, s.f1) != TriBool::Holds ||
            cls.regular_mono(*s.m0, *s.m2, s.f2) != TriBool::Holds) {
            unknown[i] = cls.regular_mono(*s.m0, *s.m1, s.f1) == TriBool::Inconclusive ||
                         cls.regular_mono(*s.m0, *s.m2, s.f2) == TriBool::Inconclusive;
            return;
        }
        PushoutResult po = pushout(cls, s);
        const Amalgam& c = po.cocone;
        // Squares past the bound are a bonus; ones too wide for a mask are left out.
        if (c.n->size() > 64) {
            if (cls.measure(*c.n) <= bound) unknown[i] = 1;
            else skipped[i] = 1;
            return;
        }
        counted[i] = 1;
        std::string problem;
        TriBool r1 = cls.regular_mono(*s.m1, *c.n, c.g1), r2 = cls.regular_mono(*s.m2, *c.n, c.g2);
        if (!is_pullback_square(c) || !commutes(c))
            problem = "pushout square is not a pullback";
        else if (r1 == TriBool::Fails || r2 == TriBool::Fails)
            problem = "pushout leg is not a regular mono";
        else if (r1 == TriBool::Inconclusive || r2 == TriBool::Inconclusive)
            unknown[i] = 1;
        if (!problem.empty()) bad[i] = json{{"violation", problem}, {"span", span_to_json(s)},
                                            {"pushout", structure_to_json(*c.n)}};
    });
    for (std::size_t i = 0; i < spans.size(); ++i) {
        rep.configurations += counted[i];
        if (bad[i]) rep.fail(*bad[i]);
        if (unknown[i]) rep.inconclusive("regular monos not characterized for this class");
    }
    if (auto n = std::count(skipped.begin(), skipped.end(), 1))
        rep.notes.push_back(std::to_string(n) + " spans with pushouts past the bound and over 64 elements not checked");
    rep.wall_ms = sw.ms();
    return rep;
}

CheckReport check_effective_unions(const AbstractClass& cls, int bound) {
    Stopwatch sw;
    CheckReport rep;
    rep.check = "effective-unions";
    rep.bound = bound;
    if (!cls.has_pushout()) {
        rep.inconclusive("class has no pushout construction");
        return rep;
    }
    const auto& members = cls.members(bound);
    struct Slot {
        std::vector<json> bad;
        std::int64_t count = 0;
        bool unknown = false;
    };
    std::vector<Slot> slots(members.size());
    parallel_for(members.size(), [&](std::size_t i) {
        const StructPtr& n = members[i];
        const auto& cs = cls.carriers(n);
        std::set<Mask> carrier(cs.begin(), cs.end());
        std::set<std::string> seen;
        Mask full = full_mask(n->size());
        for (Mask s1 : cs)
            for (Mask s2 : cs) {
                Mask s0 = s1 & s2;
                if (!carrier.count(s0)) continue;
                Square q{n.get(), s0, s1, s2, full};
                if (!seen.insert(diagram_key(q)).second) continue;
                Amalgam a = from_square(q);
                TriBool reg = tri_and(cls.regular_mono(*a.span.m1, *a.n, a.g1), cls.regular_mono(*a.span.m2, *a.n, a.g2));
                if (reg == TriBool::Fails) continue;
                if (reg == TriBool::Inconclusive) {
                    slots[i].unknown = true;
                    continue;
                }
                ++slots[i].count;
                auto v = is_effective_square(cls, a);
                if (v.induced_map_regular == TriBool::Fails) {
                    json w = square_to_json(q);
                    if (v.witness) w["comparison"] = *v.witness;
                    slots[i].bad.push_back(w);
                } else if (v.induced_map_regular == TriBool::Inconclusive) {
                    slots[i].unknown = true;
                }
            }
    });
    for (auto& s : slots) {
        rep.configurations += s.count;
        for (auto& w : s.bad) rep.fail(w);
        if (s.unknown) rep.inconclusive("regularity of a comparison map is not decided for this class");
    }
    rep.wall_ms = sw.ms();
    return rep;
}

}  // namespace sil
