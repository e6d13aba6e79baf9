#include "rgs/quotient.hpp"

#include <algorithm>

#include "rgs/error.hpp"

namespace rgs {

namespace {

Symbol class_id(const SymbolSet& cls) {
    if (cls.size() == 1) return *cls.begin();
    std::string s = "[";
    bool first = true;
    for (const auto& id : cls) {
        s += (first ? "" : ",") + id;
        first = false;
    }
    return s + "]";
}

}  // namespace

QuotientData build_quotient(const RGraph& g, P1Mode mode) {
    auto violations = validate(g);
    if (!violations.empty()) throw PreconditionError("graph is not a valid R-graph: " + violations.front());
    for (const auto& rep : check_theorem23_conditions(g, mode))
        if (!rep.holds) throw PreconditionError("condition " + rep.condition + " fails; the quotient is not defined");
    DerivedSets d = derived_sets(g, mode);
    if (d.p1_full.size() == g.vertices().size())
        throw PreconditionError(
            "every vertex has a single predecessor with a full block; the subshift is then a topological "
            "Markov shift and no quotient is computed");

    QuotientData q;
    q.source = g;
    q.mode = mode;

    // Hat construction.
    std::vector<Edge> hat_minus, hat_plus;
    std::set<Pair> hat_pairs;
    for (const auto& b : g.blocks()) {
        Relation rel = g.block(b.first, b.second);
        for (const auto& cls : omega_classes(rel, Side::Minus)) {
            Symbol id = class_id(cls);
            for (const auto& e : cls) q.class_of_minus[e] = id;
            hat_minus.push_back({id, b.first, b.second});
        }
        for (const auto& cls : omega_classes(rel, Side::Plus)) {
            Symbol id = class_id(cls);
            for (const auto& e : cls) q.class_of_plus[e] = id;
            hat_plus.push_back({id, b.second, b.first});
        }
        // Related iff some pair of representatives is related; check all agree.
        for (const auto& cm : omega_classes(rel, Side::Minus))
            for (const auto& cp : omega_classes(rel, Side::Plus)) {
                bool any = false, all = true;
                for (const auto& m : cm)
                    for (const auto& p : cp) {
                        bool r = rel.related(m, p);
                        any = any || r;
                        all = all && r;
                    }
                if (any != all)
                    throw IntegrityError("hat relation is ill-defined in block (" + b.first + "," + b.second + ")");
                if (any) hat_pairs.insert({class_id(cm), class_id(cp)});
            }
    }
    auto by_id = [](const Edge& a, const Edge& b) { return a.id < b.id; };
    std::sort(hat_minus.begin(), hat_minus.end(), by_id);
    std::sort(hat_plus.begin(), hat_plus.end(), by_id);
    q.hat_graph = RGraph(g.vertices(), hat_minus, hat_plus, hat_pairs);

    // Tree edges and root partition.
    for (const auto& e : hat_minus)
        if (d.p1_full.count(e.target)) q.tree_minus.insert(e.id);
    for (const auto& e : hat_plus)
        if (d.p1_full.count(e.source)) q.tree_plus.insert(e.id);
    for (const auto& v : g.vertices())
        if (!d.p1_full.count(v)) q.roots.insert(v);
    for (const auto& v : g.vertices()) {
        Vertex cur = v;
        size_t steps = 0;
        while (!q.roots.count(cur)) {
            cur = d.eta.at(cur);
            if (++steps > g.vertices().size()) throw IntegrityError("tree walk from '" + v + "' does not reach a root");
        }
        q.root_partition[v] = cur;
    }

    // Tilde construction.
    std::vector<Vertex> tv;
    for (const auto& v : g.vertices())
        if (q.roots.count(v)) tv.push_back(v);
    std::vector<Edge> tm, tp;
    for (const auto& e : hat_minus)
        if (!q.tree_minus.count(e.id)) tm.push_back({e.id, q.root_partition[e.source], q.root_partition[e.target]});
    for (const auto& e : hat_plus)
        if (!q.tree_plus.count(e.id)) tp.push_back({e.id, q.root_partition[e.source], q.root_partition[e.target]});
    std::set<Pair> tpairs;
    for (const auto& pr : hat_pairs)
        if (!q.tree_minus.count(pr.first) && !q.tree_plus.count(pr.second)) tpairs.insert(pr);
    q.tilde_graph = RGraph(tv, tm, tp, tpairs);
    return q;
}

RGraph associated_semigroup_graph(const RGraph& g, P1Mode mode) { return build_quotient(g, mode).tilde_graph; }

std::vector<std::set<Vertex>> neutral_classes(const RGraph& g, P1Mode mode) {
    QuotientData q = build_quotient(g, mode);
    std::map<Vertex, std::set<Vertex>> by_root;
    for (const auto& [v, r] : q.root_partition) by_root[r].insert(v);
    std::vector<std::set<Vertex>> out;
    for (auto& [_, cls] : by_root) out.push_back(cls);
    return out;
}

Token psi_token(const QuotientData& q, const Token& t) {
    switch (t.kind) {
        case TokenKind::Idempotent: {
            auto it = q.root_partition.find(t.id);
            if (it == q.root_partition.end()) throw InputError("vertex '" + t.id + "' is foreign to the quotient data");
            return {TokenKind::Idempotent, it->second};
        }
        case TokenKind::Minus: {
            auto it = q.class_of_minus.find(t.id);
            if (it == q.class_of_minus.end()) throw InputError("minus edge '" + t.id + "' is foreign to the quotient data");
            if (q.tree_minus.count(it->second))
                return {TokenKind::Idempotent, q.root_partition.at(q.source.minus_edge(t.id).source)};
            return {TokenKind::Minus, it->second};
        }
        case TokenKind::Plus: {
            auto it = q.class_of_plus.find(t.id);
            if (it == q.class_of_plus.end()) throw InputError("plus edge '" + t.id + "' is foreign to the quotient data");
            if (q.tree_plus.count(it->second))
                return {TokenKind::Idempotent, q.root_partition.at(q.source.plus_edge(t.id).source)};
            return {TokenKind::Plus, it->second};
        }
    }
    throw InputError("unknown token kind");
}

Element psi(const QuotientData& q, const Element& x) {
    if (x.zero) return Element::Zero();
    GeneratorWord w;
    for (const auto& t : to_word(x)) w.push_back(psi_token(q, t));
    return reduce_word(q.tilde_graph, w);
}

}  // namespace rgs
