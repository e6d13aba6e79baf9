#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rgs/quotient.hpp"
#include "rgs/relations.hpp"
#include "rgs/rgraph.hpp"
#include "rgs/shift.hpp"

namespace rgs {

// Small R-graph families built around a base vertex p.
enum class FamilyKind { G_p, G_pq, Gplus_pqr, G0_pqr, Gplus_pq01, G0_pq01 };

std::string kind_name(FamilyKind k);
FamilyKind parse_kind(const std::string& s);
// Role names in order, e.g. {"p", "q0", "q1"}.
std::vector<std::string> kind_roles(FamilyKind k);

using RoleMap = std::map<std::string, Vertex>;

struct FamilyInstance {
    FamilyKind kind = FamilyKind::G_p;
    RGraph graph;
    RoleMap roles;
};

// Edge counts and relation of one block, addressed by role pair (x, y).
struct BlockSpec {
    int minus = 0;
    int plus = 0;
    bool full = false;
    std::set<std::pair<int, int>> pairs;  // index pairs, ignored when full
};
using FamilyComponents = std::map<std::pair<std::string, std::string>, BlockSpec>;

// Vertices are the role names; block (x,y) gets minus ids "x_y-i" and plus ids "x_y+i".
RGraph family_graph(FamilyKind kind, const FamilyComponents& blocks);

// Blocks of an instance by role pair; indices follow sorted edge ids.
FamilyComponents family_components(const FamilyInstance& f);

// One message per violated constraint of the kind; empty when valid.
std::vector<std::string> family_violations(FamilyKind kind, const RGraph& g, const RoleMap& roles);

// Throw InputError listing every violated constraint.
FamilyInstance make_family(FamilyKind kind, const RGraph& g, RoleMap roles);
FamilyInstance make_family(FamilyKind kind, const FamilyComponents& blocks);

// Random valid instance with block sides in [1, max_block] whose links are
// defined (conditions b- and b+ hold). loops: 0 none, 1 present, -1 either.
FamilyInstance random_family(FamilyKind kind, std::mt19937_64& rng, int max_block = 3, int loops = -1);

// E-(x,y), E+(x,y) and R(x,y) by role.
SymbolSet family_minus(const FamilyInstance& f, const std::string& x, const std::string& y);
SymbolSet family_plus(const FamilyInstance& f, const std::string& x, const std::string& y);
Relation family_block(const FamilyInstance& f, const std::string& x, const std::string& y);

struct InvariantEntry {
    std::string key;        // formula text
    std::string kind;       // "equality", "inequality" or "relation"
    std::string predicted;  // empty when only the measured side can evaluate it
    std::string measured;
    std::string detail;
    std::optional<bool> match;
};

struct InvariantReport {
    std::string subject;
    std::vector<InvariantEntry> entries;
    const InvariantEntry* find(const std::string& key) const;
    bool all_match() const;
};

using LinkRelations = std::map<std::pair<int, int>, Relation>;

struct Measured {
    OrbitCensus census;
    LinkRelations links;
};

Measured measure(const RGraph& g, int depth, const std::vector<std::pair<int, int>>& link_lengths,
                 const QuotientData* q = nullptr, P1Mode mode = P1Mode::ExcludeSelf);

// Census depth and links that check_invariants needs for this instance.
int family_census_depth(const FamilyInstance& f);
std::vector<std::pair<int, int>> family_link_lengths(const FamilyInstance& f);

InvariantReport predicted_invariants(const FamilyInstance& f);
InvariantReport check_invariants(const FamilyInstance& f, const OrbitCensus& census, const LinkRelations& links);

// Q_n: R_n restricted to orbits of the kind's block cycles through the
// neighbours of p. Throws ScopeError where Q_n is not defined.
Relation family_Q(const FamilyInstance& f, int n, const OrbitCensus& census, const LinkRelations& links);

// Twice the multiplicity vector of R_2 minus Q_2, and that of R_1<2>.
std::pair<IsoClassVector, IsoClassVector> halving_identity_sides(const FamilyInstance& f, const OrbitCensus& census,
                                                                 const LinkRelations& links);

// Symbol replacement code. Entering symbols are rewritten together with the
// following leaving symbol; all others one at a time.
struct SlidingBlockRecipe {
    std::map<Symbol, Symbol> one_block;
    std::map<Pair, Pair> two_block;
    std::set<Symbol> entering;
    std::set<Symbol> leaving;
    std::vector<RGraph> intermediates;
    std::vector<std::string> steps;
};

// Image of a word, or nullopt when the word starts inside or ends inside a
// two-symbol block, or uses a symbol the recipe does not cover.
std::optional<Word> apply_recipe(const SlidingBlockRecipe& r, const Word& w);

struct RecipeCheck {
    bool bijective = false;
    int max_len = 0;
    long words = 0;
    std::string failure;
};

// Exhaustive check on admissible words up to max_len that do not cut a block.
RecipeCheck verify_recipe(const RGraph& from, const RGraph& to, const SlidingBlockRecipe& r, int max_len);

enum class Verdict { Conjugate, NotConjugate, OutOfScope };
std::string verdict_name(Verdict v);

struct ConjugacyResult {
    Verdict verdict = Verdict::OutOfScope;
    std::vector<std::string> separating;  // every differing invariant, in check order
    std::optional<SlidingBlockRecipe> recipe;
    std::string detail;
};

// Criteria for G0_pqr and G0_pq01; other kinds are out of scope.
// Throws InputError on a kind mismatch.
ConjugacyResult conjugacy_test(const FamilyInstance& a, const FamilyInstance& b);

// Three-vertex Markov-Dyck graphs over a two-vertex graph T with vertices
// alpha and beta. TGraph is the Markov-Dyck graph of T itself.
enum class Md3Variant { Alpha, Beta, TGraph };

struct Md3Instance {
    Md3Variant variant = Md3Variant::Alpha;
    Matrix T;
    long delta_super = 0;
    long delta_sub = 0;
    Matrix adjacency;
    std::vector<Vertex> names;
    RGraph md_graph;
    Vertex alpha_vertex;  // vertex standing for alpha after contraction
    Vertex beta_vertex;
};

std::string variant_name(Md3Variant v);
Md3Variant parse_variant(const std::string& s);

// Throws InputError naming the violated bound or normalization.
Md3Instance md3_make(Md3Variant variant, const Matrix& T, long delta_super = 0, long delta_sub = 0);

// Keys: I-1, I-2, I0-2, I-k(alpha), I-k(beta) for k = 1, 3, 5.
std::vector<std::string> md3_keys();
// Throws ScopeError for the length 3 and 5 refinements when delta_super != 0,
// and for keys without a formula for the variant.
long md3_formula(const Md3Instance& inst, const std::string& key);
InvariantReport md3_predict(const Md3Instance& inst);
// Census must reach length 5 when delta_super == 0, else length 2.
InvariantReport md3_check(const Md3Instance& inst, const OrbitCensus& census, const QuotientData& q);
// Measured values for every key, from a depth-5 census.
std::map<std::string, long> md3_measure(const Md3Instance& inst, int depth = 5);

struct Md3Distinction {
    std::string verdict;  // "conjugate", "not conjugate" or "undecided"
    std::string invariant;
    std::string reason;
    bool delta_relation = false;  // Delta_alpha T_ba == T_ab Delta_beta
};

// Throws InputError when T differs.
Md3Distinction md3_distinguish(const Md3Instance& a, const Md3Instance& b);

}  // namespace rgs
