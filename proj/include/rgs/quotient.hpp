#pragma once

#include <map>
#include <set>
#include <vector>

#include "rgs/rgraph.hpp"
#include "rgs/semigroup.hpp"

namespace rgs {

struct QuotientData {
    RGraph source;      // the graph the quotient was built from
    RGraph hat_graph;   // edges merged by equal Omega-sets within each block
    std::map<Symbol, Symbol> class_of_minus;
    std::map<Symbol, Symbol> class_of_plus;
    std::set<Symbol> tree_minus;  // hat minus edges with target in the full single-predecessor set
    std::set<Symbol> tree_plus;   // hat plus edges with source in that set
    std::set<Vertex> roots;
    std::map<Vertex, Vertex> root_partition;  // vertex -> root of its tree
    RGraph tilde_graph;
    P1Mode mode = P1Mode::ExcludeSelf;
};

// Throws PreconditionError when the vertex set is exhausted by full
// single-predecessor vertices, when validate() fails, or when one of the
// conditions I, II-, II+, III fails. Throws IntegrityError on an ill-defined
// hat relation.
QuotientData build_quotient(const RGraph& g, P1Mode mode = P1Mode::ExcludeSelf);

RGraph associated_semigroup_graph(const RGraph& g, P1Mode mode = P1Mode::ExcludeSelf);

// Classes of the root partition, each sorted, ordered by root.
std::vector<std::set<Vertex>> neutral_classes(const RGraph& g, P1Mode mode = P1Mode::ExcludeSelf);

// Image of a single generator under the homomorphism onto the tilde semigroup.
Token psi_token(const QuotientData& q, const Token& t);

// Homomorphism from S_R of q.source onto S_R of q.tilde_graph.
Element psi(const QuotientData& q, const Element& x);

}  // namespace rgs
