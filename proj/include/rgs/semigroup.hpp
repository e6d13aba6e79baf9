#pragma once

#include <string>
#include <vector>

#include "rgs/rgraph.hpp"

namespace rgs {

enum class TokenKind { Minus, Plus, Idempotent };

struct Token {
    TokenKind kind;
    Symbol id;  // edge id, or vertex id for an idempotent
    bool operator==(const Token& o) const { return kind == o.kind && id == o.id; }
    bool operator<(const Token& o) const { return kind != o.kind ? kind < o.kind : id < o.id; }
};

using GeneratorWord = std::vector<Token>;

// Zero, or plus_path . 1_base . minus_path.
struct Element {
    bool zero = true;
    std::vector<Symbol> plus_path;
    Vertex base;
    std::vector<Symbol> minus_path;

    static Element Zero() { return Element{}; }
    static Element idempotent(const Vertex& v) { return Element{false, {}, v, {}}; }

    bool is_idempotent() const { return !zero && plus_path.empty() && minus_path.empty(); }
    bool is_pure_minus() const { return !zero && plus_path.empty() && !minus_path.empty(); }
    bool is_pure_plus() const { return !zero && minus_path.empty() && !plus_path.empty(); }
    bool is_pure() const { return !zero && (plus_path.empty() || minus_path.empty()); }

    bool operator==(const Element& o) const {
        if (zero || o.zero) return zero == o.zero;
        return plus_path == o.plus_path && base == o.base && minus_path == o.minus_path;
    }
    bool operator!=(const Element& o) const { return !(*this == o); }
    bool operator<(const Element& o) const;
};

// Reads tokens by id: minus edge, plus edge, or vertex. Throws InputError otherwise.
Token parse_token(const RGraph& g, const std::string& id);
GeneratorWord parse_word(const RGraph& g, const std::vector<std::string>& ids);

GeneratorWord to_word(const Element& x);

Element reduce_word(const RGraph& g, const GeneratorWord& w);
Element multiply(const RGraph& g, const Element& a, const Element& b);
bool is_admissible(const RGraph& g, const GeneratorWord& w);

// Source and target vertex of a nonzero element.
Vertex element_source(const RGraph& g, const Element& x);
Vertex element_target(const RGraph& g, const Element& x);

// "plus:[..] base:v minus:[..]" or "0".
std::string to_string(const Element& x);

}  // namespace rgs
