// Command-line front end. Exit codes: 0 holds/true, 1 violated/false, 2 input error.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rgs/error.hpp"
#include "rgs/families.hpp"
#include "rgs/io.hpp"
#include "rgs/quotient.hpp"
#include "rgs/semigroup.hpp"
#include "rgs/shift.hpp"

using namespace rgs;
using io::json;

namespace {

struct Globals {
    std::string p1 = "exclude";
    int link_bound = 0;
    int power_bound = 0;
    bool as_json = false;
};

struct Report {
    std::string command;
    json inputs = json::object();
    json results = json::object();
    json witnesses = json::array();
    // Printed verbatim in text mode instead of the results, e.g. a graph document.
    std::string text_override;
};

P1Mode mode_of(const Globals& g) { return g.p1 == "include" ? P1Mode::IncludeSelf : P1Mode::ExcludeSelf; }

void print_value(std::ostream& os, const std::string& key, const json& v, int indent) {
    const std::string pad(indent, ' ');
    if (v.is_object() && !v.empty()) {
        os << pad << key << ":\n";
        for (auto it = v.begin(); it != v.end(); ++it) print_value(os, it.key(), it.value(), indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
        os << pad << key << ":\n";
        for (size_t i = 0; i < v.size(); ++i) print_value(os, "[" + std::to_string(i) + "]", v[i], indent + 2);
    } else if (v.is_string()) {
        os << pad << key << ": " << v.get<std::string>() << "\n";
    } else {
        os << pad << key << ": " << v.dump() << "\n";
    }
}

void emit(const Globals& g, const Report& r) {
    if (g.as_json) {
        json doc = {{"schema", io::kSchema},
                    {"command", r.command},
                    {"inputs", r.inputs},
                    {"mode", g.p1},
                    {"bounds", {{"link_bound", g.link_bound}, {"power_bound", g.power_bound}}},
                    {"results", r.results},
                    {"witnesses", r.witnesses}};
        std::cout << doc.dump(2) << "\n";
        return;
    }
    if (!r.text_override.empty()) {
        std::cout << r.text_override;
        return;
    }
    std::cout << r.command << " (mode " << g.p1 << ")\n";
    for (auto it = r.results.begin(); it != r.results.end(); ++it) print_value(std::cout, it.key(), it.value(), 2);
    for (size_t i = 0; i < r.witnesses.size(); ++i) print_value(std::cout, "witness " + std::to_string(i + 1), r.witnesses[i], 2);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

io::GraphDocument load(const std::string& path) { return io::parse_document(io::read_input(path), path); }

FamilyInstance load_family(const std::string& path) {
    auto d = load(path);
    if (!d.kind) throw InputError(path + ": document has no \"family\" member");
    return make_family(*d.kind, d.graph, d.roles);
}

Matrix parse_T(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 4) throw InputError("--T expects four comma-separated entries Taa,Tab,Tba,Tbb");
    Matrix T(2, std::vector<long>(2));
    for (int i = 0; i < 4; ++i) {
        try {
            T[i / 2][i % 2] = std::stol(parts[i]);
        } catch (const std::exception&) {
            throw InputError("--T entry '" + parts[i] + "' is not an integer");
        }
    }
    return T;
}

// "alpha:DS:D", "beta:DS:D" or "T".
Md3Instance parse_md3(const Matrix& T, const std::string& s) {
    auto parts = split(s, ':');
    if (parts.empty()) throw InputError("empty instance description");
    Md3Variant v = parse_variant(parts[0]);
    long ds = 0, d = 0;
    try {
        if (parts.size() > 1) ds = std::stol(parts[1]);
        if (parts.size() > 2) d = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw InputError("instance '" + s + "': deltas must be integers");
    }
    return md3_make(v, T, ds, d);
}

json census_counts(const OrbitCensus& c) { return io::census_to_json(c, false); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"R-graph semigroups, Markov-Dyck presentations and their invariants"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals G;
    app.add_option("--p1-self-loops", G.p1, "Whether a vertex whose only predecessor is itself is single-predecessor")
        ->check(CLI::IsMember({"include", "exclude"}));
    app.add_option("--link-bound", G.link_bound, "Use the bounded link search with this arm bound (0: exact)");
    app.add_option("--power-bound", G.power_bound, "Power bound for periodic classification (0: default)");
    app.add_flag("--json", G.as_json, "Emit a JSON report");

    Report R;
    int code = 0;
    std::function<void()> action;

    std::string file, file_b, set = "abcd", emit_kind = "tilde", word, spec, variant = "alpha", T_text, inst_a, inst_b;
    int max_len = 2, k = 1, l = 1, depth = 0, verify_len = 6;
    long delta_super = 0, delta_sub = 0;
    bool with_orbits = false, with_psi = false, also_measure = false;

    auto* validate_cmd = app.add_subcommand("validate", "Check the structural assumptions of a graph document");
    validate_cmd->add_option("file", file)->required();
    validate_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            auto v = validate(d.graph);
            R.command = "validate";
            R.inputs = {{"file", file}};
            R.results = {{"valid", v.empty()}, {"violations", v}};
            code = v.empty() ? 0 : 1;
        };
    });

    auto* cond_cmd = app.add_subcommand("conditions", "Evaluate condition sets on a graph");
    cond_cmd->add_option("file", file)->required();
    cond_cmd->add_option("--set", set)->check(CLI::IsMember({"thm23", "abcd"}));
    cond_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            auto v = validate(d.graph);
            if (!v.empty()) throw PreconditionError("graph is not valid: " + v.front());
            auto reps = set == "thm23" ? check_theorem23_conditions(d.graph, mode_of(G))
                                       : check_abcd_conditions(d.graph, mode_of(G));
            R.command = "conditions";
            R.inputs = {{"file", file}, {"set", set}};
            json list = json::array();
            bool all = true;
            for (const auto& r : reps) {
                list.push_back(io::condition_to_json(r));
                if (!r.holds) {
                    all = false;
                    R.witnesses.push_back(io::condition_to_json(r));
                }
                R.results["holds"][r.condition] = r.holds;
            }
            R.results["all_hold"] = all;
            if (G.as_json) R.results["conditions"] = list;
            code = all ? 0 : 1;
        };
    });

    auto* quot_cmd = app.add_subcommand("quotient", "Hat and tilde graphs and the root partition");
    quot_cmd->add_option("file", file)->required();
    quot_cmd->add_option("--emit", emit_kind)->check(CLI::IsMember({"hat", "tilde", "partition"}));
    quot_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            QuotientData q = build_quotient(d.graph, mode_of(G));
            R.command = "quotient";
            R.inputs = {{"file", file}, {"emit", emit_kind}};
            if (emit_kind == "partition") {
                R.results = {{"roots", q.roots},
                             {"root_partition", q.root_partition},
                             {"tree_minus", q.tree_minus},
                             {"tree_plus", q.tree_plus}};
            } else {
                const RGraph& out = emit_kind == "hat" ? q.hat_graph : q.tilde_graph;
                R.results = {{"graph", io::graph_to_json(out)}};
                R.text_override = io::emit_graph(out);
            }
        };
    });

    auto* reduce_cmd = app.add_subcommand("reduce", "Normal form of a generator word (edges and vertex ids)");
    reduce_cmd->add_option("file", file)->required();
    reduce_cmd->add_option("--word", word, "Comma-separated ids")->required();
    reduce_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            Element x = reduce_word(d.graph, parse_word(d.graph, split(word, ',')));
            R.command = "reduce";
            R.inputs = {{"file", file}, {"word", split(word, ',')}};
            R.results = {{"result", io::element_to_json(x)}, {"text", to_string(x)}};
            R.text_override = to_string(x) + "\n";
            code = x.zero ? 1 : 0;
        };
    });

    auto* adm_cmd = app.add_subcommand("admissible", "Is an edge word admissible in the Markov-Dyck presentation");
    adm_cmd->add_option("file", file)->required();
    adm_cmd->add_option("--word", word, "Comma-separated edge ids")->required();
    adm_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            Presentation p = identity_presentation(d.graph);
            Word w = split(word, ',');
            for (const auto& s : w)
                if (!p.has_symbol(s)) throw InputError("unknown symbol '" + s + "'");
            Element lab = word_label(p, w);
            R.command = "admissible";
            R.inputs = {{"file", file}, {"word", w}};
            R.results = {{"admissible", !lab.zero}, {"label", io::element_to_json(lab)}};
            code = lab.zero ? 1 : 0;
        };
    });

    auto* census_cmd = app.add_subcommand("census", "Periodic orbit counts by multiplier class");
    census_cmd->add_option("file", file)->required();
    census_cmd->add_option("--max-len", max_len)->check(CLI::Range(1, 12));
    census_cmd->add_flag("--orbits", with_orbits, "List the orbits");
    census_cmd->add_flag("--psi", with_psi, "Attach tilde-graph images of multipliers");
    census_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            std::optional<QuotientData> q;
            if (with_psi) q = build_quotient(d.graph, mode_of(G));
            OrbitCensus c = census(identity_presentation(d.graph), max_len, G.power_bound, q ? &*q : nullptr);
            R.command = "census";
            R.inputs = {{"file", file}, {"max_len", max_len}};
            R.results = io::census_to_json(c, with_orbits);
        };
    });

    auto* link_cmd = app.add_subcommand("link", "Link relation between negative and positive orbits");
    link_cmd->add_option("file", file)->required();
    link_cmd->add_option("-k", k, "Length of negative orbits")->check(CLI::Range(1, 8));
    link_cmd->add_option("-l", l, "Length of positive orbits")->check(CLI::Range(1, 8));
    link_cmd->callback([&] {
        action = [&] {
            auto d = load(file);
            Presentation p = identity_presentation(d.graph);
            OrbitCensus c = census(p, std::max(k, l), G.power_bound);
            Relation rel;
            if (G.link_bound > 0) {
                SymbolSet ms, ps;
                std::set<Pair> pairs;
                for (const auto& a : c.orbits)
                    if (a.length == k && a.cls == OrbitClass::Negative) ms.insert(orbit_name(a));
                for (const auto& b : c.orbits)
                    if (b.length == l && b.cls == OrbitClass::Positive) ps.insert(orbit_name(b));
                for (const auto& a : c.orbits) {
                    if (a.length != k || a.cls != OrbitClass::Negative) continue;
                    for (const auto& b : c.orbits) {
                        if (b.length != l || b.cls != OrbitClass::Positive) continue;
                        if (asymptotic_link_bounded(p, a, b, G.link_bound, mode_of(G)))
                            pairs.insert({orbit_name(a), orbit_name(b)});
                    }
                }
                rel = Relation(ms, ps, pairs);
            } else {
                rel = link_relation(p, c, k, l, mode_of(G));
            }
            R.command = "link";
            R.inputs = {{"file", file}, {"k", k}, {"l", l}};
            R.results = {{"method", G.link_bound > 0 ? "bounded" : "exact"}, {"relation", io::relation_to_json(rel)}};
        };
    });

    auto* fam = app.add_subcommand("family", "Small R-graph families around a base vertex p");
    fam->require_subcommand(1);
    auto* fam_make = fam->add_subcommand("make", "Build and validate an instance from a block specification");
    fam_make->add_option("spec", spec)->required();
    fam_make->callback([&] {
        action = [&] {
            FamilyInstance f = io::family_from_spec(io::parse_text(io::read_input(spec), spec));
            R.command = "family make";
            R.inputs = {{"spec", spec}};
            R.results = {{"document", io::family_to_json(f)}};
            R.text_override = io::family_to_json(f).dump(2) + "\n";
        };
    });
    auto* fam_pred = fam->add_subcommand("predict", "Closed-form invariants of an instance");
    fam_pred->add_option("file", file)->required();
    fam_pred->callback([&] {
        action = [&] {
            FamilyInstance f = load_family(file);
            R.command = "family predict";
            R.inputs = {{"file", file}};
            R.results = io::report_to_json(predicted_invariants(f));
        };
    });
    auto* fam_check = fam->add_subcommand("check", "Compare closed forms with a brute-force census");
    fam_check->add_option("file", file)->required();
    fam_check->add_option("--depth", depth, "Census depth (default: what the kind needs)");
    fam_check->callback([&] {
        action = [&] {
            FamilyInstance f = load_family(file);
            int dep = depth > 0 ? depth : family_census_depth(f);
            Measured m = measure(f.graph, dep, family_link_lengths(f), nullptr, mode_of(G));
            InvariantReport rep = check_invariants(f, m.census, m.links);
            R.command = "family check";
            R.inputs = {{"file", file}, {"depth", dep}};
            R.results = io::report_to_json(rep);
            R.results["census"] = census_counts(m.census);
            code = rep.all_match() ? 0 : 1;
        };
    });
    auto* fam_conj = fam->add_subcommand("conjugacy", "Conjugacy criterion with a verified replacement recipe");
    fam_conj->add_option("a", file)->required();
    fam_conj->add_option("b", file_b)->required();
    fam_conj->add_option("--verify-len", verify_len, "Exhaustive recipe check up to this word length (0: skip)");
    fam_conj->callback([&] {
        action = [&] {
            FamilyInstance a = load_family(file), b = load_family(file_b);
            ConjugacyResult res = conjugacy_test(a, b);
            R.command = "family conjugacy";
            R.inputs = {{"a", file}, {"b", file_b}, {"verify_len", verify_len}};
            R.results = {{"verdict", verdict_name(res.verdict)}, {"separating", res.separating}, {"detail", res.detail}};
            bool verified = true;
            if (res.recipe) {
                if (G.as_json) R.results["recipe"] = io::recipe_to_json(*res.recipe);
                if (verify_len > 0) {
                    RecipeCheck rc = verify_recipe(a.graph, b.graph, *res.recipe, verify_len);
                    R.results["verification"] = {
                        {"bijective", rc.bijective}, {"max_len", rc.max_len}, {"words", rc.words}, {"failure", rc.failure}};
                    verified = rc.bijective;
                }
            }
            code = res.verdict == Verdict::Conjugate && verified ? 0 : 1;
        };
    });

    auto* md3 = app.add_subcommand("md3", "Three-vertex Markov-Dyck graphs over a two-vertex graph T");
    md3->require_subcommand(1);
    auto add_instance_opts = [&](CLI::App* c) {
        c->add_option("--variant", variant)->check(CLI::IsMember({"alpha", "beta", "T", "tgraph"}));
        c->add_option("--T", T_text, "Taa,Tab,Tba,Tbb")->required();
        c->add_option("--delta-super", delta_super);
        c->add_option("--delta-sub", delta_sub);
    };
    auto* md3_make_cmd = md3->add_subcommand("make", "Adjacency matrix and Markov-Dyck graph");
    add_instance_opts(md3_make_cmd);
    md3_make_cmd->callback([&] {
        action = [&] {
            Md3Instance inst = md3_make(parse_variant(variant), parse_T(T_text), delta_super, delta_sub);
            R.command = "md3 make";
            R.inputs = {{"variant", variant}, {"T", T_text}, {"delta_super", delta_super}, {"delta_sub", delta_sub}};
            R.results = io::md3_to_json(inst);
        };
    });
    auto* md3_pred = md3->add_subcommand("predict", "Closed-form invariants, optionally measured");
    add_instance_opts(md3_pred);
    md3_pred->add_flag("--measure", also_measure, "Also run the census and compare");
    md3_pred->callback([&] {
        action = [&] {
            Md3Instance inst = md3_make(parse_variant(variant), parse_T(T_text), delta_super, delta_sub);
            R.command = "md3 predict";
            R.inputs = {{"variant", variant}, {"T", T_text}, {"delta_super", delta_super}, {"delta_sub", delta_sub}};
            if (!also_measure) {
                R.results = io::report_to_json(md3_predict(inst));
                return;
            }
            QuotientData q = build_quotient(inst.md_graph, mode_of(G));
            OrbitCensus c = census(identity_presentation(inst.md_graph), 5, G.power_bound, &q);
            InvariantReport rep = md3_check(inst, c, q);
            R.results = io::report_to_json(rep);
            code = rep.all_match() ? 0 : 1;
        };
    });
    auto* md3_dist = md3->add_subcommand("distinguish", "Separate two instances over the same T");
    md3_dist->add_option("--T", T_text, "Taa,Tab,Tba,Tbb")->required();
    md3_dist->add_option("--a", inst_a, "alpha:DS:D, beta:DS:D or T")->required();
    md3_dist->add_option("--b", inst_b, "alpha:DS:D, beta:DS:D or T")->required();
    md3_dist->callback([&] {
        action = [&] {
            Matrix T = parse_T(T_text);
            Md3Distinction d = md3_distinguish(parse_md3(T, inst_a), parse_md3(T, inst_b));
            R.command = "md3 distinguish";
            R.inputs = {{"T", T_text}, {"a", inst_a}, {"b", inst_b}};
            R.results = {{"verdict", d.verdict},
                         {"invariant", d.invariant},
                         {"reason", d.reason},
                         {"delta_relation", d.delta_relation}};
            code = d.verdict == "conjugate" ? 0 : 1;
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
        return 2;
    }

    try {
        action();
        emit(G, R);
        return code;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        R.results = {{"precondition_failed", e.what()}};
        R.text_override.clear();
        if (R.command.empty()) R.command = app.get_subcommands().front()->get_name();
        emit(G, R);
        return 1;
    } catch (const ScopeError& e) {
        std::cerr << "out of scope: " << e.what() << "\n";
        return 1;
    } catch (const IntegrityError& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 3;
    }
}
