#pragma once
// Shared fixtures and brute-force oracles for the unit tests.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rgs/relations.hpp"
#include "rgs/rgraph.hpp"
#include "rgs/semigroup.hpp"
#include "rgs/shift.hpp"

namespace test {

using namespace rgs;

inline Relation rel(std::vector<Symbol> minus, std::vector<Symbol> plus, std::vector<Pair> pairs) {
    return Relation(SymbolSet(minus.begin(), minus.end()), SymbolSet(plus.begin(), plus.end()),
                    std::set<Pair>(pairs.begin(), pairs.end()));
}

inline Relation identity2() { return Relation::identity({"a-", "b-"}, {"a+", "b+"}); }
inline Relation full2() { return Relation::full({"a-", "b-"}, {"a+", "b+"}); }
// {(a-,a+), (a-,b+), (b-,a+)}
inline Relation example1_rel() { return rel({"a-", "b-"}, {"a+", "b+"}, {{"a-", "a+"}, {"a-", "b+"}, {"b-", "a+"}}); }

// One-vertex graph "p" whose minus edges "x-" and plus edges "x+" carry rel.
inline RGraph one_vertex(const Relation& r) {
    std::vector<Edge> minus, plus;
    for (const auto& m : r.minus()) minus.push_back({m, "p", "p"});
    for (const auto& p : r.plus()) plus.push_back({p, "p", "p"});
    return RGraph({"p"}, minus, plus, r.pairs());
}

inline RGraph dyck2() { return build_markov_dyck({{2}}, {"p"}, {"a", "b"}); }
inline RGraph example1() { return one_vertex(example1_rel()); }
inline RGraph example2() {
    std::vector<Pair> pairs;
    for (auto x : {"a", "b", "c"})
        for (auto y : {"a", "b", "c"})
            if (std::string(x) != y) pairs.push_back({std::string(x) + "-", std::string(y) + "+"});
    return one_vertex(rel({"a-", "b-", "c-"}, {"a+", "b+", "c+"}, pairs));
}

// Markov-Dyck graph of [[0,1,0],[1,0,1],[1,0,1]] on pa0, pa1, pb.
inline RGraph md_a() {
    return build_markov_dyck({{0, 1, 0}, {1, 0, 1}, {1, 0, 1}}, {"pa0", "pa1", "pb"},
                             {"a0_a1", "a1_a0", "a1_b", "b_a0", "b_b"});
}

// Random relation with sides drawn from {m0..}, {p0..}.
inline Relation random_relation(std::mt19937_64& rng, int max_side = 4, double density = 0.5) {
    std::uniform_int_distribution<int> side(0, max_side);
    std::bernoulli_distribution coin(density);
    int nm = side(rng), np = side(rng);
    SymbolSet ms, ps;
    std::set<Pair> pairs;
    for (int i = 0; i < nm; ++i) ms.insert("m" + std::to_string(i));
    for (int j = 0; j < np; ++j) ps.insert("p" + std::to_string(j));
    for (const auto& m : ms)
        for (const auto& p : ps)
            if (coin(rng)) pairs.insert({m, p});
    return Relation(ms, ps, pairs);
}

// Rename every symbol through f.
inline Relation relabel(const Relation& r, const std::function<Symbol(const Symbol&)>& f) {
    SymbolSet ms, ps;
    std::set<Pair> pairs;
    for (const auto& m : r.minus()) ms.insert(f(m));
    for (const auto& p : r.plus()) ps.insert(f(p));
    for (const auto& [m, p] : r.pairs()) pairs.insert({f(m), f(p)});
    return Relation(ms, ps, pairs);
}

// Random permutation relabeling of both sides.
inline Relation shuffle_labels(const Relation& r, std::mt19937_64& rng) {
    std::vector<Symbol> ms(r.minus().begin(), r.minus().end()), ps(r.plus().begin(), r.plus().end());
    std::vector<Symbol> ms2 = ms, ps2 = ps;
    std::shuffle(ms2.begin(), ms2.end(), rng);
    std::shuffle(ps2.begin(), ps2.end(), rng);
    std::map<Symbol, Symbol> f;
    for (size_t i = 0; i < ms.size(); ++i) f[ms[i]] = "x" + ms2[i];
    for (size_t i = 0; i < ps.size(); ++i) f[ps[i]] = "y" + ps2[i];
    return relabel(r, [&](const Symbol& s) { return f.at(s); });
}

// Isomorphism by trying every pair of side permutations.
inline bool brute_isomorphic(const Relation& a, const Relation& b) {
    if (a.minus().size() != b.minus().size() || a.plus().size() != b.plus().size() ||
        a.pairs().size() != b.pairs().size())
        return false;
    std::vector<Symbol> am(a.minus().begin(), a.minus().end()), ap(a.plus().begin(), a.plus().end());
    std::vector<Symbol> bm(b.minus().begin(), b.minus().end()), bp(b.plus().begin(), b.plus().end());
    std::vector<int> pm(am.size()), pp(ap.size());
    std::iota(pm.begin(), pm.end(), 0);
    do {
        std::iota(pp.begin(), pp.end(), 0);
        do {
            bool ok = true;
            for (size_t i = 0; i < am.size() && ok; ++i)
                for (size_t j = 0; j < ap.size() && ok; ++j)
                    ok = a.related(am[i], ap[j]) == b.related(bm[pm[i]], bp[pp[j]]);
            if (ok) return true;
        } while (std::next_permutation(pp.begin(), pp.end()));
    } while (std::next_permutation(pm.begin(), pm.end()));
    return false;
}

// Stack-based admissibility on edge words, written from the definition:
// consecutive symbols must compose as a path, and a plus edge must cancel
// the most recent unmatched minus edge when one is open.
inline bool brute_admissible(const RGraph& g, const std::vector<Symbol>& w) {
    std::vector<Symbol> open;
    Vertex at;
    for (size_t i = 0; i < w.size(); ++i) {
        const Symbol& s = w[i];
        Vertex src, dst;
        if (g.is_minus(s)) {
            src = g.minus_edge(s).source;
            dst = g.minus_edge(s).target;
        } else {
            src = g.plus_edge(s).source;
            dst = g.plus_edge(s).target;
        }
        if (i > 0 && src != at) return false;
        at = dst;
        if (g.is_minus(s)) {
            open.push_back(s);
        } else if (!open.empty()) {
            if (!g.related(open.back(), s)) return false;
            open.pop_back();
        }
    }
    return true;
}

// All symbols of g (minus then plus).
inline std::vector<Symbol> all_symbols(const RGraph& g) {
    std::vector<Symbol> out;
    for (const auto& e : g.minus_edges()) out.push_back(e.id);
    for (const auto& e : g.plus_edges()) out.push_back(e.id);
    return out;
}

// Number of primitive necklaces among cyclic words of length n over the
// alphabet that are admissible in every power; an independent orbit count.
inline std::map<std::string, long> brute_orbit_counts(const RGraph& g, int n) {
    std::vector<Symbol> sym = all_symbols(g);
    std::map<std::string, long> out{{"neg", 0}, {"zero", 0}, {"pos", 0}};
    std::vector<int> idx(n, 0);
    const int k = static_cast<int>(sym.size());
    while (true) {
        std::vector<Symbol> w;
        for (int i : idx) w.push_back(sym[i]);
        // least rotation and primitive
        bool least = true, primitive = true;
        for (int r = 1; r < n; ++r) {
            std::vector<Symbol> rot(w.begin() + r, w.end());
            rot.insert(rot.end(), w.begin(), w.begin() + r);
            if (rot < w) least = false;
            if (rot == w) primitive = false;
        }
        if (least && primitive) {
            std::vector<Symbol> w4;
            for (int t = 0; t < 2 * n + 4; ++t) w4.insert(w4.end(), w.begin(), w.end());
            // periodic point exists iff every power is admissible; test a long power
            if (brute_admissible(g, w4)) {
                int minus = 0, plus = 0;
                for (const auto& s : w) (g.is_minus(s) ? minus : plus) += 1;
                // net height over one period decides the class
                if (minus > plus) ++out["neg"];
                else if (plus > minus) ++out["pos"];
                else ++out["zero"];
            }
        }
        int pos = n - 1;
        while (pos >= 0 && ++idx[pos] == k) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

// Same graph with every vertex and edge renamed and the vertex order shuffled.
inline RGraph relabel_graph(const RGraph& g, std::mt19937_64& rng) {
    auto v = [](const Vertex& x) { return "v_" + x; };
    auto s = [](const Symbol& x) { return "s_" + x; };
    std::vector<Vertex> vs;
    for (const auto& x : g.vertices()) vs.push_back(v(x));
    std::shuffle(vs.begin(), vs.end(), rng);
    std::vector<Edge> ms, ps;
    for (const auto& e : g.minus_edges()) ms.push_back({s(e.id), v(e.source), v(e.target)});
    for (const auto& e : g.plus_edges()) ps.push_back({s(e.id), v(e.source), v(e.target)});
    std::shuffle(ms.begin(), ms.end(), rng);
    std::shuffle(ps.begin(), ps.end(), rng);
    std::set<Pair> pairs;
    for (const auto& [a, b] : g.pairs()) pairs.insert({s(a), s(b)});
    return RGraph(vs, ms, ps, pairs);
}

}  // namespace test
