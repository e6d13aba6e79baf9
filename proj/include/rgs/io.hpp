#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "rgs/families.hpp"
#include "rgs/rgraph.hpp"
#include "rgs/shift.hpp"

namespace rgs::io {

using json = nlohmann::json;

inline constexpr int kSchema = 1;

// A graph document, optionally tagged with a family kind and role map.
struct GraphDocument {
    RGraph graph;
    std::optional<FamilyKind> kind;
    RoleMap roles;
};

// Edges and pairs sorted by id; plus edges carry their own source and target.
json graph_to_json(const RGraph& g);
json document_to_json(const GraphDocument& d);
json family_to_json(const FamilyInstance& f);

// Throw InputError with a JSON pointer to the offending member.
RGraph graph_from_json(const json& j);
GraphDocument document_from_json(const json& j);

// Text parsing; errors carry "<source>:<line>:<column>" or the JSON pointer.
json parse_text(const std::string& text, const std::string& source);
GraphDocument parse_document(const std::string& text, const std::string& source);

// Whole file, or standard input for "-".
std::string read_input(const std::string& path);

std::string emit_graph(const RGraph& g);

// Family block specification: {"kind": K, "blocks": [{"block": [x, y], "minus": m,
// "plus": n, "full": true | "pairs": [[i, j], ...]}]}.
FamilyInstance family_from_spec(const json& j);

json relation_to_json(const Relation& r);
json element_to_json(const Element& x);
json census_to_json(const OrbitCensus& c, bool with_orbits);
json condition_to_json(const ConditionReport& r);
json report_to_json(const InvariantReport& r);
json recipe_to_json(const SlidingBlockRecipe& r);
json md3_to_json(const Md3Instance& inst);

}  // namespace rgs::io
