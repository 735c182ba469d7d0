#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sil/catalog.hpp"
#include "sil/colimits.hpp"
#include "sil/experiments.hpp"
#include "sil/galois.hpp"
#include "sil/io.hpp"
#include "sil/parallel.hpp"

using namespace sil;

namespace {

struct Globals {
    std::string format = "text";
    int jobs = 1;
    int depth = 2;
    std::string strong = "induced";
};

int exit_code(TriBool t) {
    switch (t) {
        case TriBool::Holds: return 0;
        case TriBool::Fails: return 1;
        default: return 2;
    }
}

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Runner {
public:
    explicit Runner(const Globals& g) : g_(g) {}

    ClassPtr cls(const std::string& spec) const { return make_class(spec, g_.strong); }

    RelPtr rel(const std::string& name, const ClassPtr& c) const {
        auto names = relation_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) throw Usage("unknown relation '" + name + "'");
        if (!relation_compatible(name, *c)) throw Usage("relation '" + name + "' does not apply to " + c->name());
        return make_relation(name, c);
    }

    CheckBudget budget(int bound) const {
        CheckBudget b;
        b.bound = bound;
        b.search.max_depth = g_.depth;
        return b;
    }

    int emit(const CheckReport& r) const {
        if (json_out()) std::cout << to_json(r).dump(2) << "\n";
        else std::cout << render_text(r);
        return exit_code(r.verdict);
    }

    int emit(const ReportBundle& b) const {
        if (json_out()) std::cout << to_json(b).dump(2) << "\n";
        else std::cout << render_text(b);
        return exit_code(b.verdict());
    }

    void emit(const json& j, const std::string& text) const {
        if (json_out()) std::cout << j.dump(2) << "\n";
        else std::cout << text;
    }

    bool json_out() const { return g_.format == "json"; }

private:
    const Globals& g_;
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, ',');)
        if (!part.empty()) out.push_back(part);
    return out;
}

StructPtr load_base(const std::string& path, const AbstractClass& c) {
    auto s = std::make_shared<Structure>(read_structure_file(path, c.vocab()));
    if (!c.member(*s)) throw ParseError(path + ": structure is not a member of " + c.name());
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stable independence workbench over finite classes"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--budget-depth", g.depth, "Chain depth for amalgam equivalence")->check(CLI::NonNegativeNumber);
    app.add_option("--strong", g.strong, "Strong embeddings of user classes")->check(CLI::IsMember({"induced", "all"}));
    app.fallthrough();

    Runner run(g);
    std::function<int()> action;
    std::string klass;
    int max_size = 3;
    auto with_class = [&](CLI::App* sub) {
        sub->add_option("--class", klass, "Class, e.g. finset, graph, klocal_graph:2, vecspace:2, user:DIR")->required();
    };
    auto with_size = [&](CLI::App* sub) { sub->add_option("--max-size", max_size, "Largest member swept"); };

    // check-axioms
    std::string relation, axioms, lambda = "a+2";
    int theta = 3;
    auto* check = app.add_subcommand("check-axioms", "Run the axiom suite for one relation");
    with_class(check);
    with_size(check);
    check->add_option("--relation", relation)->required();
    check->add_option("--axioms", axioms, "Comma separated; 'all' for the extended list");
    check->add_option("--theta", theta, "Witness property parameter");
    check->add_option("--lambda", lambda, "Local character bound in a, e.g. a+2, 2a, 3");
    check->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            SuiteOptions o;
            o.budget = run.budget(max_size);
            o.theta = theta;
            o.lambda = lambda;
            o.axioms = axioms == "all" ? all_axioms() : split(axioms);
            return run.emit(run_axiom_suite(run.rel(relation, c), c, o));
        };
    });

    // compare
    std::string rel_a, rel_b;
    auto* compare = app.add_subcommand("compare", "Squares on which two relations disagree");
    with_class(compare);
    with_size(compare);
    compare->add_option("--rel-a", rel_a)->required();
    compare->add_option("--rel-b", rel_b)->required();
    compare->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            return run.emit(differential_compare(run.rel(rel_a, c), run.rel(rel_b, c), *c, run.budget(max_size)));
        };
    });

    // canonicity-search
    std::string lc;
    bool no_transitivity = false, no_monotonicity = false;
    auto* canon = app.add_subcommand("canonicity-search", "Coherent choices of amalgam classes surviving the filters");
    with_class(canon);
    with_size(canon);
    canon->add_option("--lambda", lc, "Also require local character with this bound");
    canon->add_flag("--no-transitivity", no_transitivity);
    canon->add_flag("--no-monotonicity", no_monotonicity);
    canon->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            CanonicityOptions o;
            o.bound = max_size;
            o.search = run.budget(max_size).search;
            o.transitivity = !no_transitivity;
            o.monotonicity = !no_monotonicity;
            if (!lc.empty()) o.lambda = lc;
            auto res = canonicity_search(c, o);
            for (auto& s : res.survivors) {
                std::string same;
                for (auto& n : relation_names())
                    if (relation_compatible(n, *c) && extensionally_equal(*s, *make_relation(n, c), *c, max_size))
                        same += (same.empty() ? "" : ", ") + n;
                res.report.notes.push_back(s->name() + " agrees with " + (same.empty() ? "no catalog relation" : same));
            }
            return run.emit(res.report);
        };
    });

    // colimit
    std::string kind, input;
    auto* colimit = app.add_subcommand("colimit", "Pushout of the span or pullback of the cospan in a diagram file");
    colimit->add_option("kind", kind)->required()->check(CLI::IsMember({"pushout", "pullback"}));
    with_class(colimit);
    colimit->add_option("--input", input, "Diagram file")->required();
    colimit->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            json raw = read_json_file(input);
            Amalgam a = amalgam_from_json(raw, std::filesystem::path(input).parent_path().string());
            std::ostringstream text;
            json out;
            if (kind == "pushout") {
                auto p = pushout(*c, a.span);
                auto m = p.mediator(a);
                out = {{"pushout", amalgam_to_json(p.cocone)}, {"in_class", p.in_class}};
                out["mediator"] = m ? map_to_json(*p.cocone.n, *a.n, *m) : json(nullptr);
                text << "pushout of size " << p.cocone.n->size() << (p.in_class ? "" : " (outside the class)") << "\n"
                     << "mediator into the given square: " << (m ? "yes" : "no") << "\n";
            } else {
                auto p = pullback(*a.n, a.span.m1, a.g1, a.span.m2, a.g2);
                bool is_pb = is_pullback_square(a);
                out = {{"pullback", span_to_json(p.span)}, {"image", mask_to_json(*a.n, p.image)},
                       {"given_square_is_pullback", is_pb}};
                text << "pullback of size " << p.span.m0->size() << "\n"
                     << "given square is a pullback: " << (is_pb ? "yes" : "no") << "\n";
            }
            run.emit(out, text.str());
            return 0;
        };
    });

    // ringel, effective-unions, coherence
    auto sweep = [&](const char* name, const char* what, CheckReport (*fn)(const AbstractClass&, int)) {
        auto* sub = app.add_subcommand(name, what);
        with_class(sub);
        with_size(sub);
        sub->callback([&, fn] { action = [&, fn] { return run.emit(fn(*run.cls(klass), max_size)); }; });
    };
    sweep("ringel", "Pushouts of spans are pullbacks with regular legs", verify_ringel);
    sweep("effective-unions", "Pullback squares have regular comparison maps", check_effective_unions);
    sweep("coherence", "Strong embeddings are coherent and closed under composition", check_coherence);

    // order-property
    int alpha = 1, length = 3;
    bool literal = false;
    auto* order = app.add_subcommand("order-property", "Search for an order property; exit 1 when one is found");
    with_class(order);
    order->add_option("--tuple-len", alpha)->required()->check(CLI::PositiveNumber);
    order->add_option("--length", length)->required();
    order->add_option("--max-size", max_size)->required();
    order->add_flag("--literal", literal, "Accept non-uniform sequences");
    order->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            auto w = find_order_property(*c, alpha, length, max_size, literal ? OrderSearch::Literal : OrderSearch::Uniform);
            json out{{"found", w.has_value()}};
            std::ostringstream text;
            if (w) {
                out["witness"] = to_json(*w);
                text << "order property of length " << length << " in a member of size " << w->m->size() << "\n";
                for (auto& t : w->sequence) {
                    text << " ";
                    for (int x : t) text << " " << w->m->labels()[x];
                    text << "\n";
                }
            } else {
                text << "no order property of length " << length << " up to size " << max_size << "\n";
            }
            run.emit(out, text.str());
            return w ? 1 : 0;
        };
    });

    // count-types
    std::string base;
    int bound = 0;
    bool search = false;
    auto* count = app.add_subcommand("count-types", "Galois types of tuples over a base");
    with_class(count);
    count->add_option("--base", base, "Structure file")->required();
    count->add_option("--tuple-len", alpha)->required()->check(CLI::PositiveNumber);
    count->add_option("--bound", bound, "Largest extension (default |base| + tuple length)");
    count->add_flag("--search", search, "Merge types by amalgam search instead of certificates");
    count->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            auto tc = count_types(*c, load_base(base, *c), alpha, bound, search);
            json out{{"count", tc.count}, {"next", tc.next}, {"stable", tc.stable},
                     {"verdict", to_string(tc.verdict)}, {"notes", tc.notes}};
            std::ostringstream text;
            text << tc.count << " types (" << tc.next << " one size up, " << (tc.stable ? "stable" : "not stable")
                 << ")\n";
            for (auto& n : tc.notes) text << "  note: " << n << "\n";
            run.emit(out, text.str());
            return exit_code(tc.verdict);
        };
    });

    // tameness
    int chi = 2;
    auto* tame = app.add_subcommand("tameness", "Distinct types differ over small subsets");
    with_class(tame);
    with_size(tame);
    tame->add_option("--tuple-len", alpha)->check(CLI::PositiveNumber);
    tame->add_option("--chi", chi);
    tame->add_option("--base", base, "Check one base instead of every member");
    tame->callback([&] {
        action = [&] {
            auto c = run.cls(klass);
            if (!base.empty()) return run.emit(check_tameness(*c, load_base(base, *c), alpha, chi));
            return run.emit(check_tameness(*c, alpha, chi, max_size));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }
    set_default_jobs(g.jobs);
    try {
        return action();
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const UnsupportedOperation& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 3;
}
