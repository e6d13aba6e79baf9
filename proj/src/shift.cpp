#include "rgs/shift.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <tuple>

#include "rgs/error.hpp"

namespace rgs {

Presentation::Presentation(RGraph base, std::vector<Vertex> vertices, std::vector<PSymbol> symbols)
    : base_(std::move(base)), vertices_(std::move(vertices)), symbols_(std::move(symbols)) {
    std::set<Vertex> vs(vertices_.begin(), vertices_.end());
    if (vs.size() != vertices_.size()) throw InputError("duplicate presentation vertex");
    std::sort(symbols_.begin(), symbols_.end(), [](const PSymbol& a, const PSymbol& b) { return a.id < b.id; });
    std::vector<Edge> edges;
    for (size_t i = 0; i < symbols_.size(); ++i) {
        const auto& s = symbols_[i];
        if (!index_.emplace(s.id, i).second) throw InputError("duplicate symbol '" + s.id + "'");
        if (!vs.count(s.source) || !vs.count(s.target))
            throw InputError("symbol '" + s.id + "' references an unknown vertex");
        if (!s.label.is_pure()) throw InputError("label of '" + s.id + "' is zero or not pure");
        edges.push_back({s.id, s.source, s.target});
    }
    if (!strongly_connected(vertices_, edges)) throw InputError("presentation graph is not strongly connected");
}

const PSymbol& Presentation::symbol(const Symbol& id) const { return symbols_[index_of(id)]; }

size_t Presentation::index_of(const Symbol& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown symbol '" + id + "'");
    return it->second;
}

Presentation identity_presentation(const RGraph& g) {
    std::vector<PSymbol> syms;
    for (const auto& e : g.minus_edges())
        syms.push_back({e.id, e.source, e.target, reduce_word(g, {{TokenKind::Minus, e.id}})});
    for (const auto& e : g.plus_edges())
        syms.push_back({e.id, e.source, e.target, reduce_word(g, {{TokenKind::Plus, e.id}})});
    return Presentation(g, g.vertices(), std::move(syms));
}

std::string join_word(const Word& w, const std::string& sep) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) s += (i ? sep : "") + w[i];
    return s;
}

Element word_label(const Presentation& p, const Word& w) {
    if (w.empty()) throw InputError("empty symbol sequence");
    Element x;
    for (size_t i = 0; i < w.size(); ++i) {
        const PSymbol& s = p.symbol(w[i]);
        if (i == 0) {
            x = s.label;
            continue;
        }
        if (p.symbol(w[i - 1]).target != s.source) return Element::Zero();
        x = multiply(p.base(), x, s.label);
        if (x.zero) return x;
    }
    return x;
}

bool admissible(const Presentation& p, const Word& w) { return !word_label(p, w).zero; }

namespace {

// (vertex, element) states reachable by paths of length 1..max_len from start.
std::set<std::pair<Vertex, Element>> reachable_states(const Presentation& p, const Vertex& start, int max_len) {
    std::set<std::pair<Vertex, Element>> all;
    std::set<std::pair<Vertex, Element>> frontier;
    for (const auto& s : p.symbols())
        if (s.source == start) frontier.insert({s.target, s.label});
    for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::set<std::pair<Vertex, Element>> next;
        for (const auto& st : frontier) {
            if (!all.insert(st).second) continue;
            if (len == max_len) continue;
            for (const auto& s : p.symbols()) {
                if (s.source != st.first) continue;
                Element y = multiply(p.base(), st.second, s.label);
                if (!y.zero) next.insert({s.target, y});
            }
        }
        frontier.swap(next);
    }
    return all;
}

// Nonzero normal forms with generator length <= bound.
std::vector<Element> normal_forms(const RGraph& g, int bound) {
    std::vector<Element> out;
    std::function<void(Element, int)> minus_ext = [&](Element x, int budget) {
        out.push_back(x);
        if (budget == 0) return;
        Vertex end = x.minus_path.empty() ? x.base : g.minus_edge(x.minus_path.back()).target;
        for (const auto& e : g.minus_edges()) {
            if (e.source != end) continue;
            Element y = x;
            y.minus_path.push_back(e.id);
            minus_ext(y, budget - 1);
        }
    };
    std::function<void(Element, int)> plus_ext = [&](Element x, int budget) {
        minus_ext(x, budget);
        if (budget == 0) return;
        for (const auto& f : g.plus_edges()) {
            if (f.source != x.base) continue;
            Element y = x;
            y.plus_path.push_back(f.id);
            y.base = f.target;
            plus_ext(y, budget - 1);
        }
    };
    for (const auto& v : g.vertices()) plus_ext(Element::idempotent(v), bound);
    return out;
}

}  // namespace

PresentationReport check_presentation(const Presentation& p, int cycle_bound, int g5_bound) {
    PresentationReport rep;
    rep.cycle_bound = cycle_bound;
    rep.g5_bound = g5_bound;
    const RGraph& g = p.base();
    for (const auto& v : g.vertices()) rep.classes[v];
    for (const auto& V : p.vertices())
        for (const auto& [W, x] : reachable_states(p, V, cycle_bound))
            if (W == V && x.is_idempotent()) rep.classes[x.base].insert(V);

    rep.g2 = true;
    for (const auto& [pv, cls] : rep.classes)
        if (cls.empty()) {
            rep.g2 = false;
            if (rep.detail.empty()) rep.detail = "G2: no cycle with label 1_" + pv;
        }

    std::map<Vertex, int> hits;
    for (const auto& [_, cls] : rep.classes)
        for (const auto& V : cls) ++hits[V];
    rep.g3 = true;
    for (const auto& V : p.vertices())
        if (hits[V] != 1) {
            rep.g3 = false;
            if (rep.detail.empty())
                rep.detail = "G3: vertex " + V + " lies in " + std::to_string(hits[V]) + " classes";
        }

    rep.g4 = true;
    for (const auto& [pv, cls] : rep.classes)
        for (const auto& V : cls)
            for (const auto& s : p.symbols()) {
                Element one = Element::idempotent(pv);
                if (s.source == V && multiply(g, one, s.label).zero) {
                    rep.g4 = false;
                    if (rep.detail.empty()) rep.detail = "G4: 1_" + pv + " kills the label of " + s.id;
                }
                if (s.target == V && multiply(g, s.label, one).zero) {
                    rep.g4 = false;
                    if (rep.detail.empty()) rep.detail = "G4: the label of " + s.id + " is killed by 1_" + pv;
                }
            }

    rep.g5_bounded = true;
    std::map<Vertex, std::set<std::pair<Vertex, Element>>> reach;
    for (const auto& V : p.vertices()) reach[V] = reachable_states(p, V, g5_bound + cycle_bound);
    for (const auto& f : normal_forms(g, g5_bound)) {
        Vertex q = element_source(g, f), r = element_target(g, f);
        for (const auto& U : rep.classes[q])
            for (const auto& W : rep.classes[r])
                if (!reach[U].count({W, f})) {
                    rep.g5_bounded = false;
                    if (rep.detail.empty())
                        rep.detail = "G5: no path from " + U + " to " + W + " with label " + to_string(f);
                }
    }
    return rep;
}

std::string class_name(OrbitClass c) {
    switch (c) {
        case OrbitClass::Neutral: return "neutral";
        case OrbitClass::Negative: return "negative";
        case OrbitClass::Positive: return "positive";
    }
    return "?";
}

std::string orbit_name(const Orbit& o) { return "(" + join_word(o.word, " ") + ")"; }

namespace {

Word rotate_word(const Word& w, size_t k) {
    Word r(w.begin() + k, w.end());
    r.insert(r.end(), w.begin(), w.begin() + k);
    return r;
}

bool is_primitive(const Word& w) {
    for (size_t k = 1; k < w.size(); ++k)
        if (w.size() % k == 0 && rotate_word(w, k) == w) return false;
    return true;
}

bool closed_path(const Presentation& p, const Word& w) {
    for (size_t i = 0; i < w.size(); ++i)
        if (p.symbol(w[i]).target != p.symbol(w[(i + 1) % w.size()]).source) return false;
    return true;
}

Element power(const RGraph& g, const Element& x, int k) {
    Element y = x;
    for (int i = 1; i < k && !y.zero; ++i) y = multiply(g, y, x);
    return y;
}

}  // namespace

std::optional<Orbit> classify_periodic_word(const Presentation& p, const Word& w, int power_bound) {
    if (w.empty()) throw InputError("periodic word must be non-empty");
    for (const auto& s : w) p.index_of(s);
    if (!is_primitive(w)) throw InputError("word " + join_word(w) + " is a proper power");
    if (!closed_path(p, w)) return std::nullopt;
    if (power_bound <= 0) power_bound = 2 * static_cast<int>(w.size()) + 4;
    const RGraph& g = p.base();
    Element x = word_label(p, w);
    if (x.zero) return std::nullopt;
    // Every rotation's k-th power is a factor of the (k+1)-th power of w.
    if (power(g, x, power_bound + 1).zero) return std::nullopt;

    long net = static_cast<long>(x.minus_path.size()) - static_cast<long>(x.plus_path.size());
    Orbit o;
    o.length = static_cast<int>(w.size());
    o.cls = net == 0 ? OrbitClass::Neutral : (net > 0 ? OrbitClass::Negative : OrbitClass::Positive);
    bool found = false;
    for (size_t k = 0; k < w.size() && !found; ++k) {
        Element y = word_label(p, rotate_word(w, k));
        bool ok = (o.cls == OrbitClass::Neutral && y.is_idempotent()) ||
                  (o.cls == OrbitClass::Negative && y.is_pure_minus()) ||
                  (o.cls == OrbitClass::Positive && y.is_pure_plus());
        if (ok) {
            o.multiplier = y;
            o.vertex = y.base;
            found = true;
        }
    }
    if (!found) throw IntegrityError("periodic word " + join_word(w) + " has no rotation with a pure label");
    o.word = w;
    for (size_t k = 1; k < w.size(); ++k) o.word = std::min(o.word, rotate_word(w, k));
    return o;
}

OrbitCensus census(const Presentation& p, int N, int power_bound, const QuotientData* q) {
    if (N < 1) throw InputError("census depth must be at least 1");
    OrbitCensus c;
    c.max_len = N;
    const auto& syms = p.symbols();
    const int S = static_cast<int>(syms.size());
    const RGraph& g = p.base();
    for (int n = 1; n <= N; ++n) {
        c.I_minus[n] = c.I_zero[n] = c.I_plus[n] = 0;
    }
    std::vector<int> idx;
    std::vector<Element> labels;
    std::function<void()> dfs = [&]() {
        int len = static_cast<int>(idx.size());
        if (len >= 1) {
            bool closes = syms[idx.back()].target == syms[idx.front()].source;
            bool lyndon = true;
            for (int k = 1; k < len && lyndon; ++k) {
                // Strictly smaller than every proper rotation.
                for (int i = 0; i < len; ++i) {
                    int a = idx[i], b = idx[(i + k) % len];
                    if (a != b) {
                        if (a > b) lyndon = false;
                        break;
                    }
                    if (i == len - 1) lyndon = false;
                }
            }
            if (closes && lyndon) {
                Word w;
                for (int i : idx) w.push_back(syms[i].id);
                if (auto o = classify_periodic_word(p, w, power_bound)) {
                    if (q && o->cls != OrbitClass::Neutral) o->psi_image = to_string(psi(*q, o->multiplier));
                    (o->cls == OrbitClass::Negative ? c.I_minus : o->cls == OrbitClass::Positive ? c.I_plus
                                                                                                  : c.I_zero)[len]++;
                    c.orbits.push_back(*o);
                }
            }
        }
        if (len == N) return;
        for (int s = len ? idx.front() : 0; s < S; ++s) {
            if (len && syms[s].source != syms[idx.back()].target) continue;
            Element y = len ? multiply(g, labels.back(), syms[s].label) : syms[s].label;
            if (y.zero) continue;
            idx.push_back(s);
            labels.push_back(y);
            dfs();
            idx.pop_back();
            labels.pop_back();
        }
    };
    dfs();
    std::sort(c.orbits.begin(), c.orbits.end(), [](const Orbit& a, const Orbit& b) {
        return std::tie(a.length, a.word) < std::tie(b.length, b.word);
    });
    return c;
}

namespace {

void require_condition_b(const Presentation& p, P1Mode mode) {
    for (const auto& rep : check_abcd_conditions(p.base(), mode))
        if ((rep.condition == "b-" || rep.condition == "b+") && !rep.holds)
            throw PreconditionError("condition (" + rep.condition +
                                    ") fails: negative and positive multiplier classes do not determine links");
}

void require_link_orbits(const Orbit& neg, const Orbit& pos) {
    if (neg.cls != OrbitClass::Negative || pos.cls != OrbitClass::Positive)
        throw InputError("asymptotic link needs a negative and a positive orbit");
}

// g-^m f g+^m with f = P 1 M in normal form: P cancels a tail of g-^m, M a
// head of g+^m, and for large m the remaining periodic arms must cancel each
// other indefinitely. Only the phases |P| mod k and |M| mod l matter.
bool link_exact(const RGraph& g, const Orbit& neg, const Orbit& pos) {
    const auto& gm = neg.multiplier.minus_path;
    const auto& gp = pos.multiplier.plus_path;
    const int k = static_cast<int>(gm.size()), l = static_cast<int>(gp.size());
    auto has_plus_partner = [&](const Symbol& m) {
        for (const auto& f : g.plus_edges())
            if (g.related(m, f.id)) return true;
        return false;
    };
    auto has_minus_partner = [&](const Symbol& pl) {
        for (const auto& e : g.minus_edges())
            if (g.related(e.id, pl)) return true;
        return false;
    };
    // tail_ok[a]: the last a edges of g- all have a plus partner.
    std::vector<bool> tail_ok(k, true), head_ok(l, true);
    for (int a = 1; a < k; ++a) tail_ok[a] = tail_ok[a - 1] && has_plus_partner(gm[k - a]);
    for (int b = 1; b < l; ++b) head_ok[b] = head_ok[b - 1] && has_minus_partner(gp[b - 1]);
    const int period = std::lcm(k, l);
    for (int a = 0; a < k; ++a) {
        if (!tail_ok[a]) break;
        for (int b = 0; b < l; ++b) {
            if (!head_ok[b]) break;
            bool all = true;
            for (int j = 0; j < period && all; ++j) {
                const Symbol& u = gm[((k - 1 - a - j) % k + k) % k];
                const Symbol& v = gp[(b + j) % l];
                all = g.related(u, v);
            }
            if (all) return true;
        }
    }
    return false;
}

}  // namespace

bool asymptotic_link(const Presentation& p, const Orbit& neg, const Orbit& pos, P1Mode mode) {
    require_link_orbits(neg, pos);
    require_condition_b(p, mode);
    return link_exact(p.base(), neg, pos);
}

bool asymptotic_link_bounded(const Presentation& p, const Orbit& neg, const Orbit& pos, int size_bound,
                             P1Mode mode) {
    require_link_orbits(neg, pos);
    require_condition_b(p, mode);
    const RGraph& g = p.base();
    if (size_bound <= 0)
        size_bound = 2 * static_cast<int>(g.vertices().size()) * std::max(neg.length, pos.length);
    const auto& gm = neg.multiplier.minus_path;
    const auto& gp = pos.multiplier.plus_path;
    const int k = static_cast<int>(gm.size()), l = static_cast<int>(gp.size());
    const int threshold = (size_bound + std::min(k, l) - 1) / std::min(k, l) + k * l + 1;

    // For large m every arm of f is absorbed by the periodic powers, so each
    // plus edge of f must cancel the matching minus edge of the left tail and
    // each minus edge of f the matching plus edge of the right head.
    std::vector<std::vector<Symbol>> plus_arms{{}};
    for (size_t i = 0; i < plus_arms.size(); ++i) {
        const auto arm = plus_arms[i];
        if (static_cast<int>(arm.size()) >= size_bound) continue;
        const Symbol& m = gm[k - 1 - (arm.size() % k)];
        for (const auto& f : g.plus_edges())
            if (g.related(m, f.id)) {
                auto next = arm;
                next.push_back(f.id);
                plus_arms.push_back(next);
            }
    }
    std::vector<std::vector<Symbol>> minus_arms{{}};  // stored in reverse order
    for (size_t i = 0; i < minus_arms.size(); ++i) {
        const auto arm = minus_arms[i];
        if (static_cast<int>(arm.size()) >= size_bound) continue;
        const Symbol& pl = gp[arm.size() % l];
        for (const auto& e : g.minus_edges())
            if (g.related(e.id, pl)) {
                auto next = arm;
                next.push_back(e.id);
                minus_arms.push_back(next);
            }
    }
    Element left = Element::idempotent(neg.vertex), right = Element::idempotent(pos.vertex);
    std::vector<Element> lpow{left}, rpow{right};
    for (int m = 1; m <= threshold; ++m) {
        lpow.push_back(multiply(g, lpow.back(), neg.multiplier));
        rpow.push_back(multiply(g, rpow.back(), pos.multiplier));
    }
    for (const auto& pa : plus_arms)
        for (const auto& ma : minus_arms) {
            if (pa.size() + ma.size() > static_cast<size_t>(size_bound)) continue;
            GeneratorWord fw{{TokenKind::Idempotent, neg.vertex}};
            for (const auto& id : pa) fw.push_back({TokenKind::Plus, id});
            for (auto it = ma.rbegin(); it != ma.rend(); ++it) fw.push_back({TokenKind::Minus, *it});
            fw.push_back({TokenKind::Idempotent, pos.vertex});
            Element f = reduce_word(g, fw);
            if (f.zero) continue;
            bool all = true;
            for (int m = 1; m <= threshold && all; ++m)
                all = !multiply(g, multiply(g, lpow[m], f), rpow[m]).zero;
            if (all) return true;
        }
    return false;
}

Relation link_relation(const Presentation& p, const OrbitCensus& c, int k, int l, P1Mode mode) {
    if (k > c.max_len || l > c.max_len) throw InputError("census depth does not cover the requested lengths");
    require_condition_b(p, mode);
    std::vector<const Orbit*> negs, poss;
    SymbolSet minus, plus;
    for (const auto& o : c.orbits) {
        if (o.cls == OrbitClass::Negative && o.length == k) {
            negs.push_back(&o);
            minus.insert(orbit_name(o));
        }
        if (o.cls == OrbitClass::Positive && o.length == l) {
            poss.push_back(&o);
            plus.insert(orbit_name(o));
        }
    }
    std::set<Pair> pairs;
    for (const auto* a : negs)
        for (const auto* b : poss)
            if (link_exact(p.base(), *a, *b)) pairs.insert({orbit_name(*a), orbit_name(*b)});
    return Relation(minus, plus, pairs);
}

namespace {

// Left context state: end vertex and the label with its plus arm dropped,
// which is all that later products can see. Empty context: no element.
struct CtxState {
    bool empty = true;
    Vertex v;
    Element key;
    Word rep;
};

std::vector<CtxState> left_contexts(const Presentation& p, int horizon) {
    std::vector<CtxState> out{CtxState{}};
    std::set<std::pair<Vertex, Element>> seen;
    std::vector<CtxState> frontier{CtxState{}};
    for (int len = 1; len <= horizon; ++len) {
        std::vector<CtxState> next;
        for (const auto& st : frontier)
            for (const auto& s : p.symbols()) {
                if (!st.empty && s.source != st.v) continue;
                Element y = st.empty ? s.label : multiply(p.base(), st.key, s.label);
                if (y.zero) continue;
                y.plus_path.clear();
                if (!seen.insert({s.target, y}).second) continue;
                CtxState ns{false, s.target, y, st.rep};
                ns.rep.push_back(s.id);
                next.push_back(ns);
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    return out;
}

// Right contexts grow to the left; the minus arm is dropped.
std::vector<CtxState> right_contexts(const Presentation& p, int horizon) {
    std::vector<CtxState> out{CtxState{}};
    std::set<std::pair<Vertex, Element>> seen;
    std::vector<CtxState> frontier{CtxState{}};
    for (int len = 1; len <= horizon; ++len) {
        std::vector<CtxState> next;
        for (const auto& st : frontier)
            for (const auto& s : p.symbols()) {
                if (!st.empty && s.target != st.v) continue;
                Element y = st.empty ? s.label : multiply(p.base(), s.label, st.key);
                if (y.zero) continue;
                y.minus_path.clear();
                if (!seen.insert({s.source, y}).second) continue;
                CtxState ns{false, s.source, y, {s.id}};
                ns.rep.insert(ns.rep.end(), st.rep.begin(), st.rep.end());
                next.push_back(ns);
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    return out;
}

// x = 1_b M (no plus arm), y = P 1_c (no minus arm): nonzero iff the arms cancel.
bool meet_nonzero(const RGraph& g, const Element& x, const Element& y) {
    const auto& M = x.minus_path;
    const auto& P = y.plus_path;
    Vertex xend = M.empty() ? x.base : g.minus_edge(M.back()).target;
    Vertex ystart = P.empty() ? y.base : g.plus_edge(P.front()).source;
    if (xend != ystart) return false;
    size_t n = std::min(M.size(), P.size());
    for (size_t i = 0; i < n; ++i) {
        const Edge& e = g.minus_edge(M[M.size() - 1 - i]);
        const Edge& f = g.plus_edge(P[i]);
        if (RGraph::minus_block(e) != RGraph::plus_block(f) || !g.related(e.id, f.id)) return false;
    }
    return true;
}

// Label of c.w with the plus arm dropped, or Zero when c.w is not admissible.
Element left_meet(const Presentation& p, const CtxState& c, const Word& w, const Element& lw) {
    if (c.empty) {
        Element y = lw;
        y.plus_path.clear();
        return y;
    }
    if (c.v != p.symbol(w.front()).source) return Element::Zero();
    Element y = multiply(p.base(), c.key, lw);
    y.plus_path.clear();
    return y;
}

bool right_ok(const Presentation& p, const Element& x, const Word& w, const CtxState& d) {
    if (x.zero) return false;
    if (d.empty) return true;
    if (p.symbol(w.back()).target != d.v) return false;
    return meet_nonzero(p.base(), x, d.key);
}

}  // namespace

ContextResult contexts_equal_bounded(const Presentation& p, const Word& a, const Word& b, int horizon) {
    Element la = word_label(p, a), lb = word_label(p, b);
    if (la.zero) throw InputError("word " + join_word(a) + " is not admissible");
    if (lb.zero) throw InputError("word " + join_word(b) + " is not admissible");
    ContextResult res;
    res.horizon = horizon;
    auto lefts = left_contexts(p, horizon);
    auto rights = right_contexts(p, horizon);
    std::set<std::pair<Element, Element>> middles;
    for (const auto& c : lefts) {
        Element xa = left_meet(p, c, a, la), xb = left_meet(p, c, b, lb);
        if (xa.zero && xb.zero) continue;
        if (xa.zero != xb.zero) {
            res.equal_within_horizon = false;
            res.left = c.rep;
            return res;
        }
        if (!middles.insert({xa, xb}).second) continue;
        for (const auto& d : rights)
            if (right_ok(p, xa, a, d) != right_ok(p, xb, b, d)) {
                res.equal_within_horizon = false;
                res.left = c.rep;
                res.right = d.rep;
                return res;
            }
    }
    return res;
}

std::set<Word> omega_plus_bounded(const Presentation& p, const Word& block, int n, int horizon) {
    Element lb = word_label(p, block);
    if (lb.zero) throw InputError("block " + join_word(block) + " is not admissible");
    std::set<Element> middles;
    for (const auto& c : left_contexts(p, horizon)) {
        Element x = left_meet(p, c, block, lb);
        if (!x.zero) middles.insert(x);
    }
    std::set<Word> out;
    Word ext;
    std::function<void()> grow = [&]() {
        if (static_cast<int>(ext.size()) == n) {
            Element y = word_label(p, ext);
            if (y.zero) return;
            for (const auto& x : middles)
                if (multiply(p.base(), x, y).zero) return;
            out.insert(ext);
            return;
        }
        Vertex from = ext.empty() ? p.symbol(block.back()).target : p.symbol(ext.back()).target;
        for (const auto& s : p.symbols()) {
            if (s.source != from) continue;
            ext.push_back(s.id);
            grow();
            ext.pop_back();
        }
    };
    if (n >= 1) grow();
    return out;
}

}  // namespace rgs
