#include "rgs/semigroup.hpp"

#include <sstream>
#include <tuple>

#include "rgs/error.hpp"

namespace rgs {

bool Element::operator<(const Element& o) const {
    if (zero || o.zero) return zero && !o.zero;
    return std::tie(plus_path, base, minus_path) < std::tie(o.plus_path, o.base, o.minus_path);
}

Token parse_token(const RGraph& g, const std::string& id) {
    if (g.is_minus(id)) return {TokenKind::Minus, id};
    if (g.is_plus(id)) return {TokenKind::Plus, id};
    if (g.has_vertex(id)) return {TokenKind::Idempotent, id};
    throw InputError("unknown token '" + id + "'");
}

GeneratorWord parse_word(const RGraph& g, const std::vector<std::string>& ids) {
    GeneratorWord w;
    for (const auto& id : ids) w.push_back(parse_token(g, id));
    return w;
}

GeneratorWord to_word(const Element& x) {
    GeneratorWord w;
    if (x.zero) return w;
    for (const auto& p : x.plus_path) w.push_back({TokenKind::Plus, p});
    w.push_back({TokenKind::Idempotent, x.base});
    for (const auto& m : x.minus_path) w.push_back({TokenKind::Minus, m});
    return w;
}

Element reduce_word(const RGraph& g, const GeneratorWord& w) {
    if (w.empty()) {
        if (g.vertices().size() == 1) return Element::idempotent(g.vertices().front());
        throw InputError("empty word has no value on a multi-vertex graph");
    }
    Element x;
    x.zero = false;
    bool started = false;
    // Current end vertex: target of the last minus edge, else the base.
    auto end_vertex = [&]() -> Vertex {
        return x.minus_path.empty() ? x.base : g.minus_edge(x.minus_path.back()).target;
    };
    for (const auto& tok : w) {
        switch (tok.kind) {
            case TokenKind::Idempotent: {
                if (!g.has_vertex(tok.id)) throw InputError("unknown vertex '" + tok.id + "'");
                if (!started) {
                    x.base = tok.id;
                    started = true;
                } else if (end_vertex() != tok.id) {
                    return Element::Zero();
                }
                break;
            }
            case TokenKind::Minus: {
                const Edge& e = g.minus_edge(tok.id);
                if (!started) {
                    x.base = e.source;
                    started = true;
                } else if (end_vertex() != e.source) {
                    return Element::Zero();
                }
                x.minus_path.push_back(e.id);
                break;
            }
            case TokenKind::Plus: {
                const Edge& f = g.plus_edge(tok.id);
                if (!started) {
                    x.plus_path.push_back(f.id);
                    x.base = f.target;
                    started = true;
                    break;
                }
                if (end_vertex() != f.source) return Element::Zero();
                if (x.minus_path.empty()) {
                    x.plus_path.push_back(f.id);
                    x.base = f.target;
                    break;
                }
                const Edge& top = g.minus_edge(x.minus_path.back());
                if (RGraph::minus_block(top) != RGraph::plus_block(f)) return Element::Zero();
                if (!g.related(top.id, f.id)) return Element::Zero();
                x.minus_path.pop_back();
                break;
            }
        }
    }
    return x;
}

Element multiply(const RGraph& g, const Element& a, const Element& b) {
    if (a.zero || b.zero) return Element::Zero();
    GeneratorWord w = to_word(a);
    GeneratorWord wb = to_word(b);
    w.insert(w.end(), wb.begin(), wb.end());
    return reduce_word(g, w);
}

bool is_admissible(const RGraph& g, const GeneratorWord& w) { return !reduce_word(g, w).zero; }

Vertex element_source(const RGraph& g, const Element& x) {
    if (x.zero) throw InputError("zero has no source");
    return x.plus_path.empty() ? x.base : g.plus_edge(x.plus_path.front()).source;
}

Vertex element_target(const RGraph& g, const Element& x) {
    if (x.zero) throw InputError("zero has no target");
    return x.minus_path.empty() ? x.base : g.minus_edge(x.minus_path.back()).target;
}

std::string to_string(const Element& x) {
    if (x.zero) return "0";
    std::ostringstream os;
    auto list = [&](const std::vector<Symbol>& v) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "]";
    };
    os << "plus:";
    list(x.plus_path);
    os << " base:" << x.base << " minus:";
    list(x.minus_path);
    return os.str();
}

}  // namespace rgs
