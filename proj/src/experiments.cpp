#include "sil/experiments.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "sil/colimits.hpp"
#include "sil/io.hpp"
#include "sil/parallel.hpp"

namespace sil {

namespace {

constexpr std::size_t kMaxWitnesses = 20;

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

// Calls body(n, s0, s1, s2) for every square with codomain the whole member.
struct SquareSweep {
    std::vector<std::vector<json>> bad;
    std::vector<std::int64_t> count;
};

template <class F>
CheckReport sweep_squares(const std::string& check, const AbstractClass& cls, int bound, F&& body) {
    Stopwatch sw;
    CheckReport rep;
    rep.check = check;
    rep.bound = bound;
    const auto& ms = cls.members(bound);
    SquareSweep s{std::vector<std::vector<json>>(ms.size()), std::vector<std::int64_t>(ms.size(), 0)};
    bool capped = false;
    parallel_for(ms.size(), [&](std::size_t i) {
        if (memory_cap_exceeded()) {
            capped = true;
            return;
        }
        const auto& n = ms[i];
        const auto& cs = cls.carriers(n);
        for (Mask s0 : cs)
            for (Mask s1 : cs) {
                if (!subset(s0, s1)) continue;
                for (Mask s2 : cs) {
                    if (!subset(s0, s2)) continue;
                    ++s.count[i];
                    if (auto w = body(n, Square{n.get(), s0, s1, s2, full_mask(n->size())}))
                        if (s.bad[i].size() < kMaxWitnesses) s.bad[i].push_back(std::move(*w));
                }
            }
    });
    for (std::size_t i = 0; i < ms.size(); ++i) {
        rep.configurations += s.count[i];
        for (auto& w : s.bad[i])
            if (rep.witnesses.size() < kMaxWitnesses) rep.fail(std::move(w));
            else rep.verdict = TriBool::Fails;
    }
    if (rep.verdict == TriBool::Fails && rep.witnesses.size() == kMaxWitnesses)
        rep.notes.push_back("further witnesses omitted");
    if (capped) rep.inconclusive("memory cap reached before the sweep finished");
    rep.wall_ms = sw.ms();
    return rep;
}

}  // namespace

CheckReport differential_compare(const RelPtr& a, const RelPtr& b, const AbstractClass& cls,
                                 const CheckBudget& budget) {
    auto rep = sweep_squares("compare", cls, budget.bound, [&](const StructPtr&, const Square& q) -> std::optional<json> {
        bool x = a->decide(q), y = b->decide(q);
        if (x == y) return std::nullopt;
        json w = square_to_json(q);
        w[a->name()] = x;
        w[b->name() == a->name() ? b->name() + "'" : b->name()] = y;
        return w;
    });
    rep.notes.insert(rep.notes.begin(), a->name() + " vs " + b->name());
    return rep;
}

bool extensionally_equal(const Relation& a, const Relation& b, const AbstractClass& cls, int bound) {
    for (auto& n : cls.members(bound)) {
        const auto& cs = cls.carriers(n);
        Mask full = full_mask(n->size());
        for (Mask s0 : cs)
            for (Mask s1 : cs)
                for (Mask s2 : cs) {
                    if (!subset(s0, s1) || !subset(s0, s2)) continue;
                    Square q{n.get(), s0, s1, s2, full};
                    if (a.decide(q) != b.decide(q)) return false;
                }
    }
    return true;
}

CheckReport verify_pullback_consequence(const RelPtr& rel, const AbstractClass& cls, const CheckBudget& budget) {
    auto rep = sweep_squares("pullback-consequence", cls, budget.bound,
                             [&](const StructPtr&, const Square& q) -> std::optional<json> {
                                 if (!rel->decide(q) || is_pullback_square(q)) return std::nullopt;
                                 return square_to_json(q);
                             });
    rep.notes.push_back("bases range over all finite members in place of model-homogeneous ones");
    return rep;
}

ChoiceRelation::ChoiceRelation(std::shared_ptr<const Atlas> atlas, std::vector<int> frame, std::vector<int> choice,
                               std::string name)
    : atlas_(std::move(atlas)), choice_(atlas_->spans().size(), -1), name_(std::move(name)) {
    for (std::size_t k = 0; k < frame.size(); ++k) choice_[frame[k]] = choice[k];
}

bool ChoiceRelation::decide(const Square& q) const {
    if (std::popcount(q.s3) > q.n->size()) return false;
    const auto* hits = atlas_->find_all(q);
    if (!hits) return false;
    auto [span, amalgam] = hits->front();
    return choice_[span] >= 0 && atlas_->spans()[span].component[amalgam] == choice_[span];
}

namespace {

// "span chooses comp", or constant false.
struct Lit {
    int span = -1;
    int comp = -1;
    bool operator<(const Lit& o) const { return std::tie(span, comp) < std::tie(o.span, o.comp); }
    bool operator==(const Lit& o) const { return span == o.span && comp == o.comp; }
};

// not premise... or conclusion.
struct Clause {
    std::vector<Lit> premises;
    Lit conclusion;
    bool operator<(const Clause& o) const {
        return std::tie(premises, conclusion) < std::tie(o.premises, o.conclusion);
    }
};

class Frame {
public:
    Frame(const AbstractClass& cls, const Atlas& atlas) : cls_(cls), atlas_(atlas) {
        span_slot_.assign(atlas.spans().size(), -1);
        for (std::size_t i = 0; i < atlas.spans().size(); ++i) {
            const auto& e = atlas.spans()[i];
            if (e.size > atlas.bound() || e.components == 0) continue;
            span_slot_[i] = static_cast<int>(spans_.size());
            spans_.push_back(static_cast<int>(i));
            admissible_.push_back(std::vector<char>(e.components, 1));
        }
    }

    Lit lit(const StructPtr& n, Mask s0, Mask s1, Mask s2, Mask s3) {
        auto key = std::make_tuple(n.get(), s0, s1, s2, s3);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Lit l;
        const auto* hits = atlas_.find_all(Square{n.get(), s0, s1, s2, s3});
        if (hits) {
            int span = hits->front().first;
            int slot = span_slot_[span];
            if (slot >= 0) {
                const auto& comp = atlas_.spans()[span].component;
                l = Lit{slot, comp[hits->front().second]};
                // A component may be chosen only if it holds all or none of
                // the amalgams the square stands for.
                std::set<int> seen;
                for (auto& [s, a] : *hits) seen.insert(comp[a]);
                if (seen.size() > 1)
                    for (int c : seen) admissible_[slot][c] = 0;
            }
        } else {
            missing_ = true;
        }
        cache_.emplace(key, l);
        return l;
    }

    const std::vector<int>& spans() const { return spans_; }
    const std::vector<std::vector<char>>& admissible() const { return admissible_; }
    bool missing() const { return missing_; }

private:
    const AbstractClass& cls_;
    const Atlas& atlas_;
    std::vector<int> span_slot_;
    std::vector<int> spans_;
    std::vector<std::vector<char>> admissible_;
    std::map<std::tuple<const Structure*, Mask, Mask, Mask, Mask>, Lit> cache_;
    bool missing_ = false;
};

void add_clause(std::set<Clause>& out, std::vector<Lit> premises, Lit conclusion) {
    for (auto& p : premises)
        if (p.span < 0) return;  // premise never holds
    std::sort(premises.begin(), premises.end());
    premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
    for (auto& p : premises)
        if (p == conclusion) return;
    out.insert(Clause{std::move(premises), conclusion});
}

}  // namespace

CanonicityResult canonicity_search(const ClassPtr& cls, const CanonicityOptions& options) {
    Stopwatch sw;
    CanonicityResult res;
    res.report.check = "canonicity";
    res.report.bound = options.bound;
    auto atlas = std::make_shared<Atlas>(*cls, options.bound, options.search);
    res.atlas = atlas;
    if (atlas->inconclusive()) res.report.inconclusive("some amalgam classes were not separated");
    Frame frame(*cls, *atlas);

    // Every square inside a member, so admissibility does not depend on the filters.
    for (auto& n : cls->members(options.bound)) {
        const auto& cs = cls->carriers(n);
        for (Mask s0 : cs)
            for (Mask s1 : cs)
                for (Mask s2 : cs)
                    for (Mask s3 : cs)
                        if (subset(s0, s1) && subset(s0, s2) && subset(s1 | s2, s3)) frame.lit(n, s0, s1, s2, s3);
    }

    // Constraints as clauses over choices, built from squares inside members.
    std::set<Clause> clauses;
    for (auto& n : cls->members(options.bound)) {
        const auto& cs = cls->carriers(n);
        Mask full = full_mask(n->size());
        for (bool dual : {false, true}) {
            auto L = [&](Mask s0, Mask s1, Mask s2, Mask s3) {
                return dual ? frame.lit(n, s0, s2, s1, s3) : frame.lit(n, s0, s1, s2, s3);
            };
            for (Mask s0 : cs)
                for (Mask s1 : cs) {
                    if (!subset(s0, s1)) continue;
                    for (Mask s2 : cs) {
                        if (!subset(s0, s2)) continue;
                        for (Mask s3 : cs) {
                            if (options.monotonicity && subset(s2, s3))
                                add_clause(clauses, {L(s0, s1, s3, full)}, L(s0, s1, s2, full));
                            if (!options.transitivity || !subset(s1 | s2, s3)) continue;
                            Lit a = L(s0, s1, s2, s3);
                            if (a.span < 0) continue;
                            for (Mask s4 : cs)
                                if (subset(s2, s4) && subset(s3 | s4, full))
                                    add_clause(clauses, {a, L(s2, s3, s4, full)}, L(s0, s1, s4, full));
                        }
                    }
                }
        }
    }
    if (frame.missing()) res.report.inconclusive("a square inside a member has no enumerated amalgam");

    // Each clause is checked once its last span is assigned.
    std::size_t k = frame.spans().size();
    std::vector<std::vector<const Clause*>> trigger(k);
    for (auto& c : clauses) {
        int last = c.conclusion.span;
        for (auto& p : c.premises) last = std::max(last, p.span);
        trigger[last].push_back(&c);
    }
    res.report.configurations = static_cast<std::int64_t>(clauses.size());
    res.choices_before_filters = 1;
    for (auto& adm : frame.admissible()) {
        std::size_t m = std::count(adm.begin(), adm.end(), 1);
        res.choices_before_filters = m == 0 ? 0 : std::min<std::size_t>(res.choices_before_filters * m, SIZE_MAX / 64);
    }

    std::optional<LambdaFn> lambda;
    if (options.lambda) lambda = parse_lambda(*options.lambda);
    CheckBudget lc_budget;
    lc_budget.bound = options.bound;
    lc_budget.search = options.search;
    // Choices say nothing past the bound, so NF-bar may not leave N.
    lc_budget.extension = 0;

    std::vector<int> choice(k, -1);
    auto holds = [&](const Lit& l) { return l.span >= 0 && choice[l.span] == l.comp; };
    std::size_t filtered = 0;
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
        if (i == k) {
            auto rel = std::make_shared<ChoiceRelation>(atlas, frame.spans(), choice,
                                                        "choice#" + std::to_string(res.survivor_count + filtered));
            if (lambda) {
                auto lc = check_local_character(rel, *cls, *lambda, lc_budget);
                if (lc.verdict == TriBool::Inconclusive) res.report.inconclusive("local character undecided for a choice");
                if (lc.verdict != TriBool::Holds) {
                    ++filtered;
                    return;
                }
            }
            ++res.survivor_count;
            if (res.survivors.size() < options.max_survivors) res.survivors.push_back(rel);
            return;
        }
        const auto& adm = frame.admissible()[i];
        for (int c = 0; c < static_cast<int>(adm.size()); ++c) {
            if (!adm[c]) continue;
            choice[i] = c;
            bool ok = true;
            for (auto* cl : trigger[i]) {
                bool prem = true;
                for (auto& p : cl->premises) prem = prem && holds(p);
                if (prem && !holds(cl->conclusion)) {
                    ok = false;
                    break;
                }
            }
            if (ok) assign(i + 1);
        }
        choice[i] = -1;
    };
    assign(0);

    auto& rep = res.report;
    rep.notes.push_back(std::to_string(k) + " spans with room for their pushout");
    rep.notes.push_back(std::to_string(res.survivor_count) + " surviving choices");
    if (lambda) rep.notes.push_back(std::to_string(filtered) + " removed by local character");
    if (rep.verdict == TriBool::Holds && res.survivor_count != 1) {
        json w{{"survivors", res.survivor_count}};
        if (res.survivors.size() >= 2) {
            // A square the first two survivors decide differently.
            for (auto& n : cls->members(options.bound)) {
                const auto& cs = cls->carriers(n);
                for (Mask s0 : cs)
                    for (Mask s1 : cs)
                        for (Mask s2 : cs) {
                            if (w.contains("square") || !subset(s0, s1) || !subset(s0, s2)) continue;
                            Square q{n.get(), s0, s1, s2, full_mask(n->size())};
                            if (res.survivors[0]->decide(q) != res.survivors[1]->decide(q)) w["square"] = square_to_json(q);
                        }
            }
        }
        rep.fail(w);
    }
    rep.wall_ms = sw.ms();
    return res;
}

const std::vector<std::string>& default_axioms() {
    static const std::vector<std::string> v{"closure",          "existence",         "uniqueness",
                                            "transitivity-right", "transitivity-left", "monotonicity-right",
                                            "monotonicity-left",  "base-monotonicity", "symmetry",
                                            "isomorphism-lemma", "knf",               "witness",
                                            "local-character"};
    return v;
}

const std::vector<std::string>& all_axioms() {
    static const std::vector<std::string> v = [] {
        auto a = default_axioms();
        for (auto x : {"base-monotonicity-left", "witness-left", "local-character-left", "nfbar-laws"}) a.push_back(x);
        return a;
    }();
    return v;
}

ReportBundle run_axiom_suite(const RelPtr& rel, const ClassPtr& cls, const SuiteOptions& options) {
    const auto& names = options.axioms.empty() ? default_axioms() : options.axioms;
    for (auto& n : names)
        if (std::find(all_axioms().begin(), all_axioms().end(), n) == all_axioms().end())
            throw std::invalid_argument("unknown axiom '" + n + "'");
    const CheckBudget& b = options.budget;
    const AbstractClass& c = *cls;
    LambdaFn lambda = parse_lambda(options.lambda);
    std::optional<Atlas> atlas;
    auto shared = [&]() -> const Atlas* {
        if (!atlas) atlas.emplace(c, b.bound, b.search);
        return &*atlas;
    };
    std::map<std::string, std::function<CheckReport()>> run{
        {"closure", [&] { return check_closure_under_equiv(rel, c, b, shared()); }},
        {"existence", [&] { return check_existence(rel, c, b); }},
        {"uniqueness", [&] { return check_uniqueness(rel, c, b, shared()); }},
        {"transitivity-right", [&] { return check_transitivity(rel, c, b, Side::Right); }},
        {"transitivity-left", [&] { return check_transitivity(rel, c, b, Side::Left); }},
        {"monotonicity-right", [&] { return check_monotonicity(rel, c, b, Side::Right); }},
        {"monotonicity-left", [&] { return check_monotonicity(rel, c, b, Side::Left); }},
        {"base-monotonicity", [&] { return check_base_monotonicity(rel, c, b, Side::Right); }},
        {"base-monotonicity-left", [&] { return check_base_monotonicity(rel, c, b, Side::Left); }},
        {"symmetry", [&] { return check_symmetry(rel, c, b); }},
        {"isomorphism-lemma", [&] { return check_isomorphism_lemma(rel, c, b); }},
        {"knf", [&] { return check_knf_category(rel, c, b); }},
        {"witness", [&] { return check_witness(rel, c, options.theta, b, Side::Right); }},
        {"witness-left", [&] { return check_witness(rel, c, options.theta, b, Side::Left); }},
        {"local-character", [&] { return check_local_character(rel, c, lambda, b, Side::Right); }},
        {"local-character-left", [&] { return check_local_character(rel, c, lambda, b, Side::Left); }},
        {"nfbar-laws", [&] { return check_nfbar_laws(rel, c, b); }},
    };
    ReportBundle out;
    out.title = rel->name() + " on " + cls->name();
    for (auto& n : names) {
        auto rep = run.at(n)();
        if (n == "local-character" || n == "local-character-left")
            rep.notes.insert(rep.notes.begin(), "lambda = " + options.lambda);
        out.reports.push_back(std::move(rep));
    }
    return out;
}

std::optional<TriBool> verdict_of(const ReportBundle& b, const std::string& check) {
    for (auto& r : b.reports)
        if (r.check == check) return r.verdict;
    return std::nullopt;
}

}  // namespace sil
