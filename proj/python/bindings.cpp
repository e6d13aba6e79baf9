// Thin bindings: graphs and results cross the boundary as JSON text.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgs/error.hpp"
#include "rgs/io.hpp"

namespace py = pybind11;
using namespace rgs;

namespace {

P1Mode parse_mode(const std::string& m) {
    if (m == "exclude") return P1Mode::ExcludeSelf;
    if (m == "include") return P1Mode::IncludeSelf;
    throw InputError("unknown mode '" + m + "' (expected include or exclude)");
}

RGraph graph_of(const std::string& text) { return io::parse_document(text, "<python>").graph; }

std::string conditions(const std::string& text, const std::string& set, const std::string& mode) {
    RGraph g = graph_of(text);
    std::vector<ConditionReport> reps;
    if (set == "thm23") reps = check_theorem23_conditions(g, parse_mode(mode));
    else if (set == "abcd") reps = check_abcd_conditions(g, parse_mode(mode));
    else throw InputError("unknown condition set '" + set + "'");
    io::json out = io::json::array();
    for (const auto& r : reps) out.push_back(io::condition_to_json(r));
    return out.dump();
}

std::string quotient(const std::string& text, const std::string& emit, const std::string& mode) {
    QuotientData q = build_quotient(graph_of(text), parse_mode(mode));
    if (emit == "hat") return io::graph_to_json(q.hat_graph).dump();
    if (emit == "tilde") return io::graph_to_json(q.tilde_graph).dump();
    if (emit == "partition") return io::json(q.root_partition).dump();
    throw InputError("unknown emit '" + emit + "'");
}

std::string reduce(const std::string& text, const std::vector<std::string>& word) {
    RGraph g = graph_of(text);
    return io::element_to_json(reduce_word(g, parse_word(g, word))).dump();
}

bool is_admissible_word(const std::string& text, const std::vector<std::string>& word) {
    Presentation p = identity_presentation(graph_of(text));
    for (const auto& s : word)
        if (!p.has_symbol(s)) throw InputError("unknown symbol '" + s + "'");
    return !word_label(p, word).zero;
}

std::string census_json(const std::string& text, int max_len, bool orbits) {
    if (max_len < 1 || max_len > 12) throw InputError("max_len must lie in 1..12");
    return io::census_to_json(census(identity_presentation(graph_of(text)), max_len), orbits).dump();
}

std::string md3(const std::string& variant, const Matrix& T, long ds, long d, bool measured) {
    Md3Instance inst = md3_make(parse_variant(variant), T, ds, d);
    if (!measured) return io::report_to_json(md3_predict(inst)).dump();
    QuotientData q = build_quotient(inst.md_graph);
    int depth = inst.variant != Md3Variant::TGraph && ds == 0 ? 5 : 2;
    OrbitCensus c = census(identity_presentation(inst.md_graph), depth, 0, &q);
    return io::report_to_json(md3_check(inst, c, q)).dump();
}

std::string conjugacy(const std::string& a, const std::string& b) {
    auto load = [](const std::string& t) {
        io::GraphDocument d = io::parse_document(t, "<python>");
        if (!d.kind) throw InputError("document has no family kind");
        return make_family(*d.kind, d.graph, d.roles);
    };
    ConjugacyResult r = conjugacy_test(load(a), load(b));
    io::json out{{"verdict", verdict_name(r.verdict)}, {"separating", r.separating}, {"detail", r.detail}};
    if (r.recipe) out["recipe"] = io::recipe_to_json(*r.recipe);
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_rgs, m) {
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
    py::register_exception<ScopeError>(m, "ScopeError", PyExc_RuntimeError);
    py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);

    m.def("validate", [](const std::string& t) { return validate(graph_of(t)); });
    m.def("conditions", &conditions, py::arg("graph"), py::arg("set") = "thm23", py::arg("mode") = "exclude");
    m.def("quotient", &quotient, py::arg("graph"), py::arg("emit") = "tilde", py::arg("mode") = "exclude");
    m.def("reduce", &reduce, py::arg("graph"), py::arg("word"));
    m.def("admissible", &is_admissible_word, py::arg("graph"), py::arg("word"));
    m.def("census", &census_json, py::arg("graph"), py::arg("max_len"), py::arg("orbits") = false);
    m.def("md3", &md3, py::arg("variant"), py::arg("T"), py::arg("delta_super") = 0, py::arg("delta_sub") = 0,
          py::arg("measure") = false);
    m.def("conjugacy", &conjugacy, py::arg("a"), py::arg("b"));
}
