#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rgs/relations.hpp"

namespace rgs {

using Vertex = std::string;
using Block = std::pair<Vertex, Vertex>;

struct Edge {
    Symbol id;
    Vertex source;
    Vertex target;
    bool operator==(const Edge& o) const { return id == o.id && source == o.source && target == o.target; }
};

// Partitioned directed graph with per-block relations.
// A minus edge q->r lies in block (q,r); a plus edge with source r and
// target q lies in block (q,r).
class RGraph {
public:
    RGraph() = default;
    // Throws InputError on duplicate ids, unknown vertices or pairs that
    // do not sit in a single block. Structural invariants are left to validate().
    // Edges are kept sorted by id.
    RGraph(std::vector<Vertex> vertices, std::vector<Edge> minus, std::vector<Edge> plus,
           const std::set<Pair>& pairs);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& minus_edges() const { return minus_; }
    const std::vector<Edge>& plus_edges() const { return plus_; }

    bool has_vertex(const Vertex& v) const { return vertex_set_.count(v) != 0; }
    bool is_minus(const Symbol& id) const { return minus_index_.count(id) != 0; }
    bool is_plus(const Symbol& id) const { return plus_index_.count(id) != 0; }
    const Edge& minus_edge(const Symbol& id) const;
    const Edge& plus_edge(const Symbol& id) const;

    static Block minus_block(const Edge& e) { return {e.source, e.target}; }
    static Block plus_block(const Edge& e) { return {e.target, e.source}; }

    // Relation of block (q,r); empty sides when the block has no edges.
    Relation block(const Vertex& q, const Vertex& r) const;
    // Blocks with at least one edge on either side.
    std::vector<Block> blocks() const;
    // All related pairs across blocks.
    const std::set<Pair>& pairs() const { return pairs_; }
    bool related(const Symbol& m, const Symbol& p) const { return pairs_.count({m, p}) != 0; }

    bool operator==(const RGraph& o) const {
        return vertices_ == o.vertices_ && minus_ == o.minus_ && plus_ == o.plus_ && pairs() == o.pairs();
    }

private:
    std::vector<Vertex> vertices_;
    std::set<Vertex> vertex_set_;
    std::vector<Edge> minus_;
    std::vector<Edge> plus_;
    std::map<Symbol, size_t> minus_index_;
    std::map<Symbol, size_t> plus_index_;
    std::map<Block, Relation> blocks_;
    std::set<Pair> pairs_;
};

// Empty when all invariants hold; otherwise one message per violation.
std::vector<std::string> validate(const RGraph& g);

enum class P1Mode { IncludeSelf, ExcludeSelf };

struct DerivedSets {
    std::set<Vertex> p1;
    std::map<Vertex, Vertex> eta;
    std::set<Symbol> marked_minus;
    std::set<Symbol> marked_plus;
    std::set<Vertex> p1_full;
    P1Mode mode = P1Mode::ExcludeSelf;
};

DerivedSets derived_sets(const RGraph& g, P1Mode mode = P1Mode::ExcludeSelf);

struct Witness {
    std::vector<Vertex> vertices;
    std::vector<Symbol> minus_path;
    std::vector<Symbol> plus_path;
    std::string note;
};

struct ConditionReport {
    std::string condition;
    bool holds = true;
    std::optional<Witness> witness;
};

// Conditions I, II-, II+, III.
std::vector<ConditionReport> check_theorem23_conditions(const RGraph& g, P1Mode mode = P1Mode::ExcludeSelf);
// Conditions a-, a+, b-, b+, c, d.
std::vector<ConditionReport> check_abcd_conditions(const RGraph& g, P1Mode mode = P1Mode::ExcludeSelf);

using Matrix = std::vector<std::vector<long>>;

// Markov-Dyck graph of a strongly connected adjacency matrix. Vertex names
// default to p0, p1, ...; the k-th edge (row-major) gets ids "e<k>-"/"e<k>+"
// unless edge names are supplied (one per edge, row-major).
RGraph build_markov_dyck(const Matrix& adjacency, std::vector<Vertex> vertex_names = {},
                         std::vector<Symbol> edge_names = {});

// True iff (P, E-) is strongly connected.
bool strongly_connected(const std::vector<Vertex>& vertices, const std::vector<Edge>& edges);

// Side-respecting R-graph isomorphism (vertices, minus and plus edges, relations).
bool rgraph_isomorphic(const RGraph& a, const RGraph& b);

}  // namespace rgs
