#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rgs/quotient.hpp"
#include "rgs/rgraph.hpp"
#include "rgs/semigroup.hpp"

namespace rgs {

struct PSymbol {
    Symbol id;
    Vertex source;
    Vertex target;
    Element label;
};

// Labeled strongly connected graph with pure or idempotent labels over base.
class Presentation {
public:
    Presentation() = default;
    // Throws InputError on unknown vertices, duplicate ids, zero or mixed labels,
    // or a graph that is not strongly connected.
    Presentation(RGraph base, std::vector<Vertex> vertices, std::vector<PSymbol> symbols);

    const RGraph& base() const { return base_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<PSymbol>& symbols() const { return symbols_; }
    const PSymbol& symbol(const Symbol& id) const;
    size_t index_of(const Symbol& id) const;
    bool has_symbol(const Symbol& id) const { return index_.count(id) != 0; }

private:
    RGraph base_;
    std::vector<Vertex> vertices_;
    std::vector<PSymbol> symbols_;  // sorted by id
    std::map<Symbol, size_t> index_;
};

using Word = std::vector<Symbol>;

Presentation identity_presentation(const RGraph& g);

// Label product of a symbol sequence; Zero when it is not a path.
Element word_label(const Presentation& p, const Word& w);
bool admissible(const Presentation& p, const Word& w);

struct PresentationReport {
    std::map<Vertex, std::set<Vertex>> classes;  // p -> V(p)
    bool g2 = false;
    bool g3 = false;
    bool g4 = false;
    bool g5_bounded = false;
    std::string detail;  // first failure, if any
    int cycle_bound = 0;
    int g5_bound = 0;
};

PresentationReport check_presentation(const Presentation& p, int cycle_bound, int g5_bound);

enum class OrbitClass { Neutral, Negative, Positive };

struct Orbit {
    Word word;  // least rotation
    int length = 0;
    OrbitClass cls = OrbitClass::Neutral;
    Element multiplier;
    Vertex vertex;
    std::string psi_image;  // tilde-graph form of the multiplier, when requested
};

std::string orbit_name(const Orbit& o);
std::string class_name(OrbitClass c);

// std::nullopt when the word is not periodic. Throws InputError for
// non-primitive words. power_bound <= 0 selects 2*|w|+4.
std::optional<Orbit> classify_periodic_word(const Presentation& p, const Word& w, int power_bound = 0);

struct OrbitCensus {
    int max_len = 0;
    std::map<int, long> I_minus, I_zero, I_plus;
    std::vector<Orbit> orbits;  // by length, then word
};

// Optional quotient data fills Orbit::psi_image for negative and positive orbits.
OrbitCensus census(const Presentation& p, int N, int power_bound = 0, const QuotientData* q = nullptr);

// Exact test: some point is left asymptotic to neg and right asymptotic to pos.
// Throws PreconditionError unless conditions b- and b+ hold.
bool asymptotic_link(const Presentation& p, const Orbit& neg, const Orbit& pos, P1Mode mode = P1Mode::ExcludeSelf);

// Search over connecting elements with arms of length <= size_bound, checked
// for powers up to a threshold. size_bound <= 0 selects 2*|P|*max(k,l).
bool asymptotic_link_bounded(const Presentation& p, const Orbit& neg, const Orbit& pos, int size_bound = 0,
                             P1Mode mode = P1Mode::ExcludeSelf);

// Link relation between negative orbits of length k and positive orbits of length l.
Relation link_relation(const Presentation& p, const OrbitCensus& c, int k, int l,
                       P1Mode mode = P1Mode::ExcludeSelf);

struct ContextResult {
    bool equal_within_horizon = true;
    Word left;
    Word right;
    int horizon = 0;
};

ContextResult contexts_equal_bounded(const Presentation& p, const Word& a, const Word& b, int horizon);

std::set<Word> omega_plus_bounded(const Presentation& p, const Word& block, int n, int horizon);

std::string join_word(const Word& w, const std::string& sep = ",");

}  // namespace rgs
