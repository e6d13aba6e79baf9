#include "rgs/io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "rgs/error.hpp"

namespace rgs::io {

namespace {

json edges_json(std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    json out = json::array();
    for (const auto& e : edges) out.push_back({{"id", e.id}, {"from", e.source}, {"to", e.target}});
    return out;
}

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw InputError((pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& at) {
    if (!j.is_object()) fail(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(at, "missing member '" + key + "'");
    return *it;
}

std::string string_at(const json& j, const std::string& at) {
    if (!j.is_string()) fail(at, "expected a string");
    return j.get<std::string>();
}

long integer_at(const json& j, const std::string& at) {
    if (!j.is_number_integer()) fail(at, "expected an integer");
    return j.get<long>();
}

const json& array_at(const json& j, const std::string& at) {
    if (!j.is_array()) fail(at, "expected an array");
    return j;
}

std::vector<Edge> read_edges(const json& j, const std::string& at) {
    std::vector<Edge> out;
    const json& a = array_at(j, at);
    for (size_t i = 0; i < a.size(); ++i) {
        const std::string p = at + "/" + std::to_string(i);
        out.push_back({string_at(member(a[i], "id", p), p + "/id"), string_at(member(a[i], "from", p), p + "/from"),
                       string_at(member(a[i], "to", p), p + "/to")});
    }
    return out;
}

std::string line_col(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

json word_json(const Word& w) { return json(w); }

}  // namespace

json graph_to_json(const RGraph& g) {
    json rel = json::array();
    for (const auto& [m, p] : g.pairs()) rel.push_back({m, p});
    return {{"schema", kSchema},
            {"vertices", g.vertices()},
            {"minus_edges", edges_json(g.minus_edges())},
            {"plus_edges", edges_json(g.plus_edges())},
            {"relation", rel}};
}

json document_to_json(const GraphDocument& d) {
    json j = graph_to_json(d.graph);
    if (d.kind) j["family"] = {{"kind", kind_name(*d.kind)}, {"roles", d.roles}};
    return j;
}

json family_to_json(const FamilyInstance& f) { return document_to_json({f.graph, f.kind, f.roles}); }

RGraph graph_from_json(const json& j) {
    if (!j.is_object()) fail("", "expected an object");
    if (j.contains("schema") && integer_at(j["schema"], "/schema") != kSchema)
        fail("/schema", "unsupported schema version");
    std::vector<Vertex> vertices;
    const json& vs = array_at(member(j, "vertices", ""), "/vertices");
    for (size_t i = 0; i < vs.size(); ++i) vertices.push_back(string_at(vs[i], "/vertices/" + std::to_string(i)));
    auto minus = read_edges(member(j, "minus_edges", ""), "/minus_edges");
    auto plus = read_edges(member(j, "plus_edges", ""), "/plus_edges");
    std::set<Pair> pairs;
    if (j.contains("relation")) {
        const json& r = array_at(j["relation"], "/relation");
        for (size_t i = 0; i < r.size(); ++i) {
            const std::string p = "/relation/" + std::to_string(i);
            if (!r[i].is_array() || r[i].size() != 2) fail(p, "expected a [minus-id, plus-id] pair");
            pairs.insert({string_at(r[i][0], p + "/0"), string_at(r[i][1], p + "/1")});
        }
    }
    try {
        return RGraph(vertices, minus, plus, pairs);
    } catch (const InputError& e) {
        fail("", e.what());
    }
}

GraphDocument document_from_json(const json& j) {
    GraphDocument d;
    d.graph = graph_from_json(j);
    if (j.contains("family")) {
        const json& f = j["family"];
        try {
            d.kind = parse_kind(string_at(member(f, "kind", "/family"), "/family/kind"));
        } catch (const InputError& e) {
            fail("/family/kind", e.what());
        }
        const json& roles = member(f, "roles", "/family");
        if (!roles.is_object()) fail("/family/roles", "expected an object");
        for (auto it = roles.begin(); it != roles.end(); ++it)
            d.roles[it.key()] = string_at(it.value(), "/family/roles/" + it.key());
    }
    return d;
}

json parse_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        // Drop nlohmann's "[json.exception...] parse error at line L, column C: " prefix.
        auto pos = msg.find(": ", msg.find("column"));
        throw InputError(source + ":" + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                         (pos == std::string::npos ? msg : msg.substr(pos + 2)));
    }
}

GraphDocument parse_document(const std::string& text, const std::string& source) {
    json j = parse_text(text, source);
    try {
        return document_from_json(j);
    } catch (const InputError& e) {
        throw InputError(source + ":" + e.what());
    }
}

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string emit_graph(const RGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

FamilyInstance family_from_spec(const json& j) {
    FamilyKind kind;
    try {
        kind = parse_kind(string_at(member(j, "kind", ""), "/kind"));
    } catch (const InputError& e) {
        fail("/kind", e.what());
    }
    FamilyComponents comps;
    const json& blocks = array_at(member(j, "blocks", ""), "/blocks");
    for (size_t i = 0; i < blocks.size(); ++i) {
        const std::string p = "/blocks/" + std::to_string(i);
        const json& b = blocks[i];
        const json& xy = member(b, "block", p);
        if (!xy.is_array() || xy.size() != 2) fail(p + "/block", "expected [x, y] role names");
        BlockSpec s;
        s.minus = static_cast<int>(integer_at(member(b, "minus", p), p + "/minus"));
        s.plus = static_cast<int>(integer_at(member(b, "plus", p), p + "/plus"));
        if (s.minus < 0 || s.plus < 0) fail(p, "edge counts must be nonnegative");
        s.full = b.value("full", false);
        if (b.contains("pairs")) {
            const json& pr = array_at(b["pairs"], p + "/pairs");
            for (size_t k = 0; k < pr.size(); ++k) {
                const std::string q = p + "/pairs/" + std::to_string(k);
                if (!pr[k].is_array() || pr[k].size() != 2) fail(q, "expected an index pair");
                int x = static_cast<int>(integer_at(pr[k][0], q + "/0"));
                int y = static_cast<int>(integer_at(pr[k][1], q + "/1"));
                if (x < 0 || x >= s.minus || y < 0 || y >= s.plus) fail(q, "index out of range");
                s.pairs.insert({x, y});
            }
        }
        comps[{string_at(xy[0], p + "/block/0"), string_at(xy[1], p + "/block/1")}] = s;
    }
    return make_family(kind, comps);
}

json relation_to_json(const Relation& r) {
    json pairs = json::array();
    for (const auto& [m, p] : r.pairs()) pairs.push_back({m, p});
    return {{"minus", r.minus()}, {"plus", r.plus()}, {"pairs", pairs}, {"encoding", canonical_encoding(r)}};
}

json element_to_json(const Element& x) {
    if (x.zero) return "0";
    return {{"plus", x.plus_path}, {"base", x.base}, {"minus", x.minus_path}};
}

json census_to_json(const OrbitCensus& c, bool with_orbits) {
    auto counts = [](const std::map<int, long>& m) {
        json o = json::object();
        for (const auto& [k, v] : m) o[std::to_string(k)] = v;
        return o;
    };
    json j = {{"max_len", c.max_len},
              {"I_minus", counts(c.I_minus)},
              {"I_zero", counts(c.I_zero)},
              {"I_plus", counts(c.I_plus)}};
    if (with_orbits) {
        json orbits = json::array();
        for (const auto& o : c.orbits) {
            json e = {{"word", word_json(o.word)},
                      {"length", o.length},
                      {"class", class_name(o.cls)},
                      {"multiplier", element_to_json(o.multiplier)}};
            if (!o.psi_image.empty()) e["psi_image"] = o.psi_image;
            orbits.push_back(e);
        }
        j["orbits"] = orbits;
    }
    return j;
}

json condition_to_json(const ConditionReport& r) {
    json j = {{"condition", r.condition}, {"holds", r.holds}};
    if (r.witness) {
        j["witness"] = {{"vertices", r.witness->vertices},
                        {"minus_path", r.witness->minus_path},
                        {"plus_path", r.witness->plus_path},
                        {"note", r.witness->note}};
    }
    return j;
}

json report_to_json(const InvariantReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        json x = {{"key", e.key}, {"kind", e.kind}, {"predicted", e.predicted}, {"measured", e.measured}};
        if (!e.detail.empty()) x["detail"] = e.detail;
        x["match"] = e.match ? json(*e.match) : json(nullptr);
        entries.push_back(x);
    }
    return {{"subject", r.subject}, {"entries", entries}, {"all_match", r.all_match()}};
}

json recipe_to_json(const SlidingBlockRecipe& r) {
    json one = json::object(), two = json::array(), inter = json::array();
    for (const auto& [a, b] : r.one_block) one[a] = b;
    for (const auto& [a, b] : r.two_block) two.push_back({{a.first, a.second}, {b.first, b.second}});
    for (const auto& g : r.intermediates) inter.push_back(graph_to_json(g));
    return {{"one_block", one},
            {"two_block", two},
            {"entering", r.entering},
            {"leaving", r.leaving},
            {"steps", r.steps},
            {"intermediates", inter}};
}

json md3_to_json(const Md3Instance& inst) {
    return {{"variant", variant_name(inst.variant)},
            {"T", inst.T},
            {"delta_super", inst.delta_super},
            {"delta_sub", inst.delta_sub},
            {"adjacency", inst.adjacency},
            {"vertices", inst.names},
            {"alpha_vertex", inst.alpha_vertex},
            {"beta_vertex", inst.beta_vertex},
            {"graph", graph_to_json(inst.md_graph)}};
}

}  // namespace rgs::io
