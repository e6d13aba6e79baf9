#pragma once
// Rewriting-based reference reducer, used as an oracle for reduce_word.

#include <optional>
#include <random>
#include <vector>

#include "rgs/rgraph.hpp"
#include "rgs/semigroup.hpp"

namespace test {

using namespace rgs;

inline Vertex tok_source(const RGraph& g, const Token& t) {
    switch (t.kind) {
        case TokenKind::Minus: return g.minus_edge(t.id).source;
        case TokenKind::Plus: return g.plus_edge(t.id).source;
        default: return t.id;
    }
}

inline Vertex tok_target(const RGraph& g, const Token& t) {
    switch (t.kind) {
        case TokenKind::Minus: return g.minus_edge(t.id).target;
        case TokenKind::Plus: return g.plus_edge(t.id).target;
        default: return t.id;
    }
}

// Applies local rules until none fires:
//   x y -> 0 when t(x) != s(y)
//   1_v x -> x, x 1_v -> x (composable)
//   e- f+ -> 1_{s(e-)} when related, else 0 (the path returns to where e- started)
// Returns nullopt for zero.
inline std::optional<GeneratorWord> reference_reduce(const RGraph& g, GeneratorWord w) {
    if (w.empty()) return std::nullopt;
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (tok_target(g, w[i]) != tok_source(g, w[i + 1])) return std::nullopt;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            const Token& x = w[i];
            const Token& y = w[i + 1];
            if (x.kind == TokenKind::Idempotent) {
                w.erase(w.begin() + i);
                changed = true;
                break;
            }
            if (y.kind == TokenKind::Idempotent) {
                w.erase(w.begin() + i + 1);
                changed = true;
                break;
            }
            if (x.kind == TokenKind::Minus && y.kind == TokenKind::Plus) {
                if (!g.related(x.id, y.id)) return std::nullopt;
                w[i] = Token{TokenKind::Idempotent, g.minus_edge(x.id).source};
                w.erase(w.begin() + i + 1);
                changed = true;
                break;
            }
        }
    }
    return w;
}

// Element corresponding to a reduced reference word.
inline Element reference_element(const RGraph& g, const std::optional<GeneratorWord>& w) {
    if (!w) return Element::Zero();
    Element e;
    e.zero = false;
    for (const auto& t : *w) {
        if (t.kind == TokenKind::Plus) e.plus_path.push_back(t.id);
        if (t.kind == TokenKind::Minus) e.minus_path.push_back(t.id);
    }
    if (w->size() == 1 && w->front().kind == TokenKind::Idempotent) e.base = w->front().id;
    else if (!e.plus_path.empty()) e.base = g.plus_edge(e.plus_path.back()).target;
    else e.base = g.minus_edge(e.minus_path.front()).source;
    return e;
}

inline GeneratorWord random_generator_word(const RGraph& g, std::mt19937_64& rng, int max_len) {
    std::vector<Token> alphabet;
    for (const auto& e : g.minus_edges()) alphabet.push_back({TokenKind::Minus, e.id});
    for (const auto& e : g.plus_edges()) alphabet.push_back({TokenKind::Plus, e.id});
    for (const auto& v : g.vertices()) alphabet.push_back({TokenKind::Idempotent, v});
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
    // Bias towards paths: pick the next token among composable ones when possible.
    GeneratorWord w;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<Token> ok;
        if (!w.empty() && (rng() % 8) != 0)
            for (const auto& t : alphabet)
                if (tok_source(g, t) == tok_target(g, w.back())) ok.push_back(t);
        if (ok.empty()) w.push_back(alphabet[pick(rng)]);
        else w.push_back(ok[rng() % ok.size()]);
    }
    return w;
}

}  // namespace test
