#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rgs {

using Symbol = std::string;
using SymbolSet = std::set<Symbol>;
using Pair = std::pair<Symbol, Symbol>;

enum class Side { Minus, Plus };

// A finite bipartite relation between a minus-symbol set and a plus-symbol set.
// Sides are kept sorted; pairs always reference symbols of the matching side.
class Relation {
public:
    Relation() = default;
    Relation(SymbolSet minus, SymbolSet plus, std::set<Pair> pairs);

    static Relation full(const SymbolSet& minus, const SymbolSet& plus);
    static Relation identity(const std::vector<Symbol>& minus, const std::vector<Symbol>& plus);

    const SymbolSet& minus() const { return minus_; }
    const SymbolSet& plus() const { return plus_; }
    const std::set<Pair>& pairs() const { return pairs_; }

    bool related(const Symbol& m, const Symbol& p) const { return pairs_.count({m, p}) != 0; }
    bool empty_sides() const { return minus_.empty() && plus_.empty(); }

    // Same sides, same pairs.
    bool operator==(const Relation& o) const {
        return minus_ == o.minus_ && plus_ == o.plus_ && pairs_ == o.pairs_;
    }
    bool operator!=(const Relation& o) const { return !(*this == o); }

    // Restriction to the given sub-sides.
    Relation restrict(const SymbolSet& minus, const SymbolSet& plus) const;

private:
    SymbolSet minus_;
    SymbolSet plus_;
    std::set<Pair> pairs_;
};

SymbolSet omega(const Relation& rel, Side side, const Symbol& symbol);

// (E-(R), E+(R)): symbols related to every symbol of the opposite side.
std::pair<SymbolSet, SymbolSet> full_rows_cols(const Relation& rel);

struct ClassInvariants {
    std::vector<SymbolSet> classes_minus;
    std::vector<SymbolSet> classes_plus;
    long D_minus = 0;
    long D_plus = 0;
};

// Classes of symbols with equal Omega-sets on each side (sorted by first member).
std::vector<SymbolSet> omega_classes(const Relation& rel, Side side);

// Throws PreconditionError when a side is empty (gcd of an empty family).
ClassInvariants class_invariants(const Relation& rel);

struct RhoFlags {
    bool triangle = false;
    bool circle = false;
    bool nabla = false;
    bool circle_nabla = false;
};

RhoFlags rho_flags(const Relation& rel);

// Connected components of the bipartite graph; isolated symbols become
// one-symbol pieces without pairs. Ordered by smallest member.
std::vector<Relation> decompose(const Relation& rel);

// Disjoint union of relations; throws InputError when sides overlap.
Relation kronecker_sum(const std::vector<Relation>& parts);

// R restricted to the sides complementary to sub's sides.
// Throws InputError unless sub is a union of Omega-closed pieces of rel.
Relation complement(const Relation& rel, const Relation& sub);

Relation kronecker_product(const Relation& a, const Relation& b);

// Relation on length-n vectors: related iff some cyclic shift k matches all coordinates.
Relation power_relation(const Relation& rel, int n);

// Vector symbol used by power_relation, e.g. "<a,b>".
Symbol vector_symbol(const std::vector<Symbol>& coords);

struct RelationIso {
    std::map<Symbol, Symbol> minus_map;
    std::map<Symbol, Symbol> plus_map;
};

std::optional<RelationIso> are_isomorphic(const Relation& a, const Relation& b);

// Canonical string for the isomorphism class (side-respecting).
std::string canonical_encoding(const Relation& rel);

// Multiplicities of the isomorphism classes of irreducible pieces.
using IsoClassVector = std::map<std::string, long>;

IsoClassVector mu_vector(const Relation& rel);

// Sum of multiplicity vectors.
IsoClassVector mu_add(const IsoClassVector& a, const IsoClassVector& b);

std::string to_string(const Relation& rel);

}  // namespace rgs
