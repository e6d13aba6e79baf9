#include "rgs/rgraph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "rgs/error.hpp"

namespace rgs {

RGraph::RGraph(std::vector<Vertex> vertices, std::vector<Edge> minus, std::vector<Edge> plus,
               const std::set<Pair>& pairs)
    : vertices_(std::move(vertices)), minus_(std::move(minus)), plus_(std::move(plus)) {
    auto by_id = [](const Edge& a, const Edge& b) { return a.id < b.id; };
    std::sort(minus_.begin(), minus_.end(), by_id);
    std::sort(plus_.begin(), plus_.end(), by_id);
    for (const auto& v : vertices_)
        if (!vertex_set_.insert(v).second) throw InputError("duplicate vertex id '" + v + "'");
    std::set<Symbol> ids;
    auto check_edge = [&](const Edge& e) {
        if (!ids.insert(e.id).second) throw InputError("duplicate edge id '" + e.id + "'");
        if (vertex_set_.count(e.id)) throw InputError("edge id '" + e.id + "' collides with a vertex id");
        if (!vertex_set_.count(e.source)) throw InputError("edge '" + e.id + "' has unknown source '" + e.source + "'");
        if (!vertex_set_.count(e.target)) throw InputError("edge '" + e.id + "' has unknown target '" + e.target + "'");
    };
    std::map<Block, std::pair<SymbolSet, SymbolSet>> sides;
    for (size_t i = 0; i < minus_.size(); ++i) {
        check_edge(minus_[i]);
        minus_index_[minus_[i].id] = i;
        sides[minus_block(minus_[i])].first.insert(minus_[i].id);
    }
    for (size_t i = 0; i < plus_.size(); ++i) {
        check_edge(plus_[i]);
        plus_index_[plus_[i].id] = i;
        sides[plus_block(plus_[i])].second.insert(plus_[i].id);
    }
    std::map<Block, std::set<Pair>> block_pairs;
    for (const auto& [m, p] : pairs) {
        if (!is_minus(m)) throw InputError("relation pair references unknown minus edge '" + m + "'");
        if (!is_plus(p)) throw InputError("relation pair references unknown plus edge '" + p + "'");
        Block bm = minus_block(minus_edge(m));
        if (bm != plus_block(plus_edge(p)))
            throw InputError("relation pair (" + m + "," + p + ") crosses blocks");
        block_pairs[bm].insert({m, p});
        pairs_.insert({m, p});
    }
    for (auto& [b, s] : sides) blocks_[b] = Relation(s.first, s.second, block_pairs[b]);
}

const Edge& RGraph::minus_edge(const Symbol& id) const {
    auto it = minus_index_.find(id);
    if (it == minus_index_.end()) throw InputError("unknown minus edge '" + id + "'");
    return minus_[it->second];
}

const Edge& RGraph::plus_edge(const Symbol& id) const {
    auto it = plus_index_.find(id);
    if (it == plus_index_.end()) throw InputError("unknown plus edge '" + id + "'");
    return plus_[it->second];
}

Relation RGraph::block(const Vertex& q, const Vertex& r) const {
    auto it = blocks_.find({q, r});
    if (it == blocks_.end()) return Relation();
    return it->second;
}

std::vector<Block> RGraph::blocks() const {
    std::vector<Block> out;
    for (const auto& [b, _] : blocks_) out.push_back(b);
    return out;
}

bool strongly_connected(const std::vector<Vertex>& vertices, const std::vector<Edge>& edges) {
    if (vertices.empty()) return false;
    auto reach = [&](bool forward) {
        std::set<Vertex> seen{vertices.front()};
        std::deque<Vertex> queue{vertices.front()};
        while (!queue.empty()) {
            Vertex v = queue.front();
            queue.pop_front();
            for (const auto& e : edges) {
                const Vertex& from = forward ? e.source : e.target;
                const Vertex& to = forward ? e.target : e.source;
                if (from == v && seen.insert(to).second) queue.push_back(to);
            }
        }
        return seen.size() == vertices.size();
    };
    return reach(true) && reach(false);
}

std::vector<std::string> validate(const RGraph& g) {
    std::vector<std::string> out;
    if (g.vertices().empty()) out.push_back("empty vertex set");
    for (const auto& b : g.blocks()) {
        Relation rel = g.block(b.first, b.second);
        if (rel.minus().empty() != rel.plus().empty())
            out.push_back("block asymmetry at (" + b.first + "," + b.second + ")");
    }
    if (!g.vertices().empty() && !strongly_connected(g.vertices(), g.minus_edges()))
        out.push_back("not strongly connected");
    return out;
}

DerivedSets derived_sets(const RGraph& g, P1Mode mode) {
    DerivedSets d;
    d.mode = mode;
    std::map<Vertex, std::set<Vertex>> preds;
    for (const auto& e : g.minus_edges()) preds[e.target].insert(e.source);
    for (const auto& p : g.vertices()) {
        const auto& pr = preds[p];
        if (pr.size() != 1) continue;
        const Vertex& q = *pr.begin();
        if (mode == P1Mode::ExcludeSelf && q == p) continue;
        d.p1.insert(p);
        d.eta[p] = q;
    }
    for (const auto& p : d.p1) {
        Relation rel = g.block(d.eta[p], p);
        auto [rows, cols] = full_rows_cols(rel);
        d.marked_minus.insert(rows.begin(), rows.end());
        d.marked_plus.insert(cols.begin(), cols.end());
        if (rel.pairs().size() == rel.minus().size() * rel.plus().size()) d.p1_full.insert(p);
    }
    return d;
}

namespace {

// Directed step used in path searches: edge id and its endpoints in path direction.
struct Step {
    Symbol id;
    Vertex from;
    Vertex to;
};

std::vector<Step> marked_steps(const RGraph& g, const std::set<Symbol>& marked, bool minus) {
    std::vector<Step> out;
    for (const auto& e : minus ? g.minus_edges() : g.plus_edges())
        if (marked.count(e.id)) out.push_back({e.id, e.source, e.target});
    std::sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return a.id < b.id; });
    return out;
}

// Shortest path from `from` to `to` (non-empty when require_special or from == to is
// handled by the caller), optionally through at least one special edge. BFS over
// (vertex, seen-special) states; edges explored in id order.
std::optional<std::vector<Symbol>> shortest_path(const std::vector<Step>& steps, const Vertex& from,
                                                 const Vertex& to, const std::set<Symbol>& special,
                                                 bool require_special) {
    using State = std::pair<Vertex, bool>;
    std::map<State, std::pair<State, Symbol>> parent;
    State start{from, false};
    std::set<State> seen{start};
    std::deque<State> queue{start};
    std::optional<State> goal;
    auto is_goal = [&](const State& s) { return s.first == to && (!require_special || s.second); };
    while (!queue.empty() && !goal) {
        State cur = queue.front();
        queue.pop_front();
        for (const auto& st : steps) {
            if (st.from != cur.first) continue;
            State nxt{st.to, cur.second || special.count(st.id) != 0};
            if (!seen.insert(nxt).second) continue;
            parent[nxt] = {cur, st.id};
            if (is_goal(nxt)) {
                goal = nxt;
                break;
            }
            queue.push_back(nxt);
        }
    }
    if (!goal) return std::nullopt;
    std::vector<Symbol> path;
    for (State s = *goal; s != start;) {
        auto& [prev, id] = parent[s];
        path.push_back(id);
        s = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

bool shorter(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

// Shortest non-empty cycle made of `steps` that contains an edge from `through`.
std::optional<std::vector<Symbol>> shortest_cycle(const std::vector<Step>& steps, const std::set<Symbol>& through) {
    std::optional<std::vector<Symbol>> best;
    for (const auto& st : steps) {
        if (!through.count(st.id)) continue;
        std::vector<Symbol> cyc{st.id};
        if (st.to != st.from) {
            auto back = shortest_path(steps, st.to, st.from, {}, false);
            if (!back) continue;
            cyc.insert(cyc.end(), back->begin(), back->end());
        }
        // Rotate so the smallest id leads; keeps witnesses canonical.
        std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
        if (!best || shorter(cyc, *best)) best = cyc;
    }
    return best;
}

std::set<Vertex> deficient_vertices(const DerivedSets& d) {
    std::set<Vertex> out;
    std::set_difference(d.p1.begin(), d.p1.end(), d.p1_full.begin(), d.p1_full.end(), std::inserter(out, out.end()));
    return out;
}

ConditionReport cycle_condition(const std::string& name, const std::vector<Step>& steps,
                                const std::set<Symbol>& through, bool minus) {
    ConditionReport rep{name, true, std::nullopt};
    if (auto cyc = shortest_cycle(steps, through)) {
        rep.holds = false;
        Witness w;
        (minus ? w.minus_path : w.plus_path) = *cyc;
        w.note = "cycle of marked edges";
        rep.witness = w;
    }
    return rep;
}

// Simultaneous marked minus and plus paths q -> r between distinct P1 vertices.
// With special sets given, at least one of the two paths must use a special edge.
ConditionReport path_pair_condition(const std::string& name, const DerivedSets& d,
                                    const std::vector<Step>& msteps, const std::vector<Step>& psteps,
                                    const std::set<Symbol>* mspecial, const std::set<Symbol>* pspecial) {
    ConditionReport rep{name, true, std::nullopt};
    std::optional<std::pair<size_t, Witness>> best;
    for (const auto& q : d.p1)
        for (const auto& r : d.p1) {
            if (q == r) continue;
            std::vector<std::pair<std::optional<std::vector<Symbol>>, std::optional<std::vector<Symbol>>>> options;
            if (mspecial) {
                options.push_back({shortest_path(msteps, q, r, *mspecial, true),
                                   shortest_path(psteps, q, r, {}, false)});
                options.push_back({shortest_path(msteps, q, r, {}, false),
                                   shortest_path(psteps, q, r, *pspecial, true)});
            } else {
                options.push_back({shortest_path(msteps, q, r, {}, false), shortest_path(psteps, q, r, {}, false)});
            }
            for (auto& [fm, fp] : options) {
                if (!fm || !fp) continue;
                size_t len = fm->size() + fp->size();
                if (!best || len < best->first) {
                    Witness w{{q, r}, *fm, *fp, "marked minus and plus paths between distinct P1 vertices"};
                    best = std::make_pair(len, w);
                }
            }
        }
    if (best) {
        rep.holds = false;
        rep.witness = best->second;
    }
    return rep;
}

}  // namespace

std::vector<ConditionReport> check_theorem23_conditions(const RGraph& g, P1Mode mode) {
    DerivedSets d = derived_sets(g, mode);
    std::set<Vertex> deficient = deficient_vertices(d);
    std::vector<ConditionReport> out;

    ConditionReport c1{"I", true, std::nullopt};
    for (const auto& p : deficient) {
        Relation rel = g.block(d.eta[p], p);
        auto [rows, cols] = full_rows_cols(rel);
        if (!rows.empty() && !cols.empty()) {
            c1.holds = false;
            Witness w{{d.eta[p], p}, {rows.begin(), rows.end()}, {cols.begin(), cols.end()},
                      "block has a full row and a full column but is not full"};
            c1.witness = w;
            break;
        }
    }
    out.push_back(c1);

    auto msteps = marked_steps(g, d.marked_minus, true);
    auto psteps = marked_steps(g, d.marked_plus, false);
    std::set<Symbol> mspecial, pspecial;
    for (const auto& st : msteps)
        if (deficient.count(st.to)) mspecial.insert(st.id);
    for (const auto& st : psteps)
        if (deficient.count(st.from)) pspecial.insert(st.id);

    out.push_back(cycle_condition("II-", msteps, mspecial, true));
    out.push_back(cycle_condition("II+", psteps, pspecial, false));
    out.push_back(path_pair_condition("III", d, msteps, psteps, &mspecial, &pspecial));
    return out;
}

std::vector<ConditionReport> check_abcd_conditions(const RGraph& g, P1Mode mode) {
    DerivedSets d = derived_sets(g, mode);
    std::vector<ConditionReport> out;

    auto twin_check = [&](const std::string& name, Side side) {
        ConditionReport rep{name, true, std::nullopt};
        for (const auto& b : g.blocks()) {
            Relation rel = g.block(b.first, b.second);
            for (const auto& cls : omega_classes(rel, side)) {
                if (cls.size() < 2) continue;
                rep.holds = false;
                Witness w;
                w.vertices = {b.first, b.second};
                auto it = cls.begin();
                std::vector<Symbol> twins{*it, *std::next(it)};
                (side == Side::Minus ? w.minus_path : w.plus_path) = twins;
                w.note = "distinct edges with equal Omega-sets";
                rep.witness = w;
                return rep;
            }
        }
        return rep;
    };
    out.push_back(twin_check("a-", Side::Minus));
    out.push_back(twin_check("a+", Side::Plus));

    auto msteps = marked_steps(g, d.marked_minus, true);
    auto psteps = marked_steps(g, d.marked_plus, false);
    out.push_back(cycle_condition("b-", msteps, d.marked_minus, true));
    out.push_back(cycle_condition("b+", psteps, d.marked_plus, false));

    ConditionReport cc{"c", true, std::nullopt};
    for (const auto& p : d.p1) {
        if (d.eta[p] == p) continue;
        Relation rel = g.block(d.eta[p], p);
        auto [rows, cols] = full_rows_cols(rel);
        if (!rows.empty() && !cols.empty()) {
            cc.holds = false;
            cc.witness = Witness{{d.eta[p], p}, {rows.begin(), rows.end()}, {cols.begin(), cols.end()},
                                 "block has a full row and a full column"};
            break;
        }
    }
    out.push_back(cc);
    out.push_back(path_pair_condition("d", d, msteps, psteps, nullptr, nullptr));
    return out;
}

RGraph build_markov_dyck(const Matrix& adjacency, std::vector<Vertex> vertex_names, std::vector<Symbol> edge_names) {
    const size_t n = adjacency.size();
    if (n == 0) throw InputError("adjacency matrix is empty");
    for (const auto& row : adjacency) {
        if (row.size() != n) throw InputError("adjacency matrix is not square");
        for (long x : row)
            if (x < 0) throw InputError("adjacency matrix has a negative entry");
    }
    if (vertex_names.empty())
        for (size_t i = 0; i < n; ++i) vertex_names.push_back("p" + std::to_string(i));
    if (vertex_names.size() != n) throw InputError("vertex name count does not match the matrix");
    std::vector<Edge> minus, plus, plain;
    std::set<Pair> pairs;
    size_t k = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (long c = 0; c < adjacency[i][j]; ++c, ++k) {
                Symbol base = edge_names.empty() ? "e" + std::to_string(k) : (k < edge_names.size() ? edge_names[k] : "");
                if (base.empty()) throw InputError("too few edge names for the matrix");
                minus.push_back({base + "-", vertex_names[i], vertex_names[j]});
                plus.push_back({base + "+", vertex_names[j], vertex_names[i]});
                pairs.insert({base + "-", base + "+"});
            }
    if (!edge_names.empty() && edge_names.size() != k) throw InputError("edge name count does not match the matrix");
    if (!strongly_connected(vertex_names, minus)) throw InputError("adjacency matrix is not strongly connected");
    return RGraph(vertex_names, minus, plus, pairs);
}

bool rgraph_isomorphic(const RGraph& a, const RGraph& b) {
    if (a.vertices().size() != b.vertices().size() || a.minus_edges().size() != b.minus_edges().size() ||
        a.plus_edges().size() != b.plus_edges().size())
        return false;
    std::vector<Vertex> va = a.vertices();
    std::vector<Vertex> perm = b.vertices();
    std::sort(perm.begin(), perm.end());
    auto blocks_a = a.blocks();
    std::map<Block, std::string> enc_a, enc_b;
    for (const auto& bl : blocks_a) enc_a[bl] = canonical_encoding(a.block(bl.first, bl.second));
    for (const auto& bl : b.blocks()) enc_b[bl] = canonical_encoding(b.block(bl.first, bl.second));
    if (enc_a.size() != enc_b.size()) return false;
    do {
        std::map<Vertex, Vertex> pi;
        for (size_t i = 0; i < va.size(); ++i) pi[va[i]] = perm[i];
        bool ok = true;
        for (const auto& [bl, code] : enc_a) {
            auto it = enc_b.find({pi[bl.first], pi[bl.second]});
            if (it == enc_b.end() || it->second != code) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace rgs
