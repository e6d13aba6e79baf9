#include "rgs/relations.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "rgs/error.hpp"

namespace rgs {

Relation::Relation(SymbolSet minus, SymbolSet plus, std::set<Pair> pairs)
    : minus_(std::move(minus)), plus_(std::move(plus)), pairs_(std::move(pairs)) {
    for (const auto& [m, p] : pairs_) {
        if (!minus_.count(m)) throw InputError("relation pair references unknown minus symbol '" + m + "'");
        if (!plus_.count(p)) throw InputError("relation pair references unknown plus symbol '" + p + "'");
    }
}

Relation Relation::full(const SymbolSet& minus, const SymbolSet& plus) {
    std::set<Pair> pairs;
    for (const auto& m : minus)
        for (const auto& p : plus) pairs.insert({m, p});
    return Relation(minus, plus, std::move(pairs));
}

Relation Relation::identity(const std::vector<Symbol>& minus, const std::vector<Symbol>& plus) {
    if (minus.size() != plus.size()) throw InputError("identity relation needs equally sized sides");
    std::set<Pair> pairs;
    for (size_t i = 0; i < minus.size(); ++i) pairs.insert({minus[i], plus[i]});
    return Relation(SymbolSet(minus.begin(), minus.end()), SymbolSet(plus.begin(), plus.end()),
                    std::move(pairs));
}

Relation Relation::restrict(const SymbolSet& minus, const SymbolSet& plus) const {
    std::set<Pair> pairs;
    for (const auto& pr : pairs_)
        if (minus.count(pr.first) && plus.count(pr.second)) pairs.insert(pr);
    return Relation(minus, plus, std::move(pairs));
}

SymbolSet omega(const Relation& rel, Side side, const Symbol& symbol) {
    SymbolSet out;
    if (side == Side::Minus) {
        if (!rel.minus().count(symbol)) throw InputError("unknown minus symbol '" + symbol + "'");
        for (const auto& [m, p] : rel.pairs())
            if (m == symbol) out.insert(p);
    } else {
        if (!rel.plus().count(symbol)) throw InputError("unknown plus symbol '" + symbol + "'");
        for (const auto& [m, p] : rel.pairs())
            if (p == symbol) out.insert(m);
    }
    return out;
}

std::pair<SymbolSet, SymbolSet> full_rows_cols(const Relation& rel) {
    SymbolSet rows, cols;
    for (const auto& m : rel.minus())
        if (omega(rel, Side::Minus, m).size() == rel.plus().size()) rows.insert(m);
    for (const auto& p : rel.plus())
        if (omega(rel, Side::Plus, p).size() == rel.minus().size()) cols.insert(p);
    return {rows, cols};
}

std::vector<SymbolSet> omega_classes(const Relation& rel, Side side) {
    std::map<SymbolSet, SymbolSet> by_omega;
    const SymbolSet& syms = side == Side::Minus ? rel.minus() : rel.plus();
    for (const auto& s : syms) by_omega[omega(rel, side, s)].insert(s);
    std::vector<SymbolSet> out;
    for (auto& [_, cls] : by_omega) out.push_back(cls);
    std::sort(out.begin(), out.end(),
              [](const SymbolSet& a, const SymbolSet& b) { return *a.begin() < *b.begin(); });
    return out;
}

namespace {

long gcd_of_sizes(const std::vector<SymbolSet>& classes) {
    long g = 0;
    for (const auto& c : classes) g = std::gcd(g, static_cast<long>(c.size()));
    return g;
}

bool pairwise_gcd_equal(const std::vector<SymbolSet>& classes, long d) {
    for (size_t i = 0; i < classes.size(); ++i)
        for (size_t j = i + 1; j < classes.size(); ++j)
            if (std::gcd(static_cast<long>(classes[i].size()), static_cast<long>(classes[j].size())) != d)
                return false;
    return true;
}

}  // namespace

ClassInvariants class_invariants(const Relation& rel) {
    if (rel.minus().empty() || rel.plus().empty())
        throw PreconditionError("class invariants are undefined for a relation with an empty side");
    ClassInvariants ci;
    ci.classes_minus = omega_classes(rel, Side::Minus);
    ci.classes_plus = omega_classes(rel, Side::Plus);
    ci.D_minus = gcd_of_sizes(ci.classes_minus);
    ci.D_plus = gcd_of_sizes(ci.classes_plus);
    return ci;
}

RhoFlags rho_flags(const Relation& rel) {
    RhoFlags f;
    auto cm = omega_classes(rel, Side::Minus);
    auto cp = omega_classes(rel, Side::Plus);
    long dm = gcd_of_sizes(cm);
    long dp = gcd_of_sizes(cp);
    f.triangle = pairwise_gcd_equal(cm, dm) && pairwise_gcd_equal(cp, dp);
    auto [rows, cols] = full_rows_cols(rel);
    f.circle = rows.empty() && cols.empty();
    f.nabla = f.triangle && dm == 1 && dp == 1;
    f.circle_nabla = f.circle && f.triangle;
    return f;
}

std::vector<Relation> decompose(const Relation& rel) {
    // Union-find over minus symbols (tag 'm') and plus symbols (tag 'p').
    std::map<std::pair<char, Symbol>, std::pair<char, Symbol>> parent;
    std::function<std::pair<char, Symbol>(const std::pair<char, Symbol>&)> find =
        [&](const std::pair<char, Symbol>& x) {
            auto it = parent.find(x);
            if (it->second == x) return x;
            auto root = find(it->second);
            it->second = root;
            return root;
        };
    for (const auto& m : rel.minus()) parent[{'m', m}] = {'m', m};
    for (const auto& p : rel.plus()) parent[{'p', p}] = {'p', p};
    for (const auto& [m, p] : rel.pairs()) {
        auto a = find({'m', m});
        auto b = find({'p', p});
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<std::pair<char, Symbol>, std::pair<SymbolSet, SymbolSet>> groups;
    for (const auto& m : rel.minus()) groups[find({'m', m})].first.insert(m);
    for (const auto& p : rel.plus()) groups[find({'p', p})].second.insert(p);
    std::vector<Relation> out;
    for (auto& [_, sides] : groups) out.push_back(rel.restrict(sides.first, sides.second));
    std::sort(out.begin(), out.end(), [](const Relation& a, const Relation& b) {
        auto key = [](const Relation& r) {
            return std::make_pair(r.minus().empty() ? std::string("\x7f") + *r.plus().begin()
                                                    : *r.minus().begin(),
                                  r.plus().empty() ? std::string() : *r.plus().begin());
        };
        return key(a) < key(b);
    });
    return out;
}

Relation kronecker_sum(const std::vector<Relation>& parts) {
    SymbolSet minus, plus;
    std::set<Pair> pairs;
    for (const auto& r : parts) {
        for (const auto& m : r.minus())
            if (!minus.insert(m).second) throw InputError("kronecker sum: minus symbol '" + m + "' repeated");
        for (const auto& p : r.plus())
            if (!plus.insert(p).second) throw InputError("kronecker sum: plus symbol '" + p + "' repeated");
        pairs.insert(r.pairs().begin(), r.pairs().end());
    }
    return Relation(std::move(minus), std::move(plus), std::move(pairs));
}

Relation complement(const Relation& rel, const Relation& sub) {
    for (const auto& m : sub.minus()) {
        if (!rel.minus().count(m)) throw InputError("complement: '" + m + "' is not a minus symbol of the relation");
        for (const auto& p : omega(rel, Side::Minus, m))
            if (!sub.plus().count(p))
                throw InputError("complement: sub-relation is not closed at minus symbol '" + m + "'");
    }
    for (const auto& p : sub.plus()) {
        if (!rel.plus().count(p)) throw InputError("complement: '" + p + "' is not a plus symbol of the relation");
        for (const auto& m : omega(rel, Side::Plus, p))
            if (!sub.minus().count(m))
                throw InputError("complement: sub-relation is not closed at plus symbol '" + p + "'");
    }
    if (rel.restrict(sub.minus(), sub.plus()).pairs() != sub.pairs())
        throw InputError("complement: sub-relation pairs differ from the relation on its sides");
    SymbolSet minus, plus;
    std::set_difference(rel.minus().begin(), rel.minus().end(), sub.minus().begin(), sub.minus().end(),
                        std::inserter(minus, minus.end()));
    std::set_difference(rel.plus().begin(), rel.plus().end(), sub.plus().begin(), sub.plus().end(),
                        std::inserter(plus, plus.end()));
    return rel.restrict(minus, plus);
}

namespace {

Symbol pair_symbol(const Symbol& a, const Symbol& b) { return "(" + a + "," + b + ")"; }

}  // namespace

Relation kronecker_product(const Relation& a, const Relation& b) {
    SymbolSet minus, plus;
    std::set<Pair> pairs;
    for (const auto& x : a.minus())
        for (const auto& y : b.minus()) minus.insert(pair_symbol(x, y));
    for (const auto& x : a.plus())
        for (const auto& y : b.plus()) plus.insert(pair_symbol(x, y));
    for (const auto& [am, ap] : a.pairs())
        for (const auto& [bm, bp] : b.pairs()) pairs.insert({pair_symbol(am, bm), pair_symbol(ap, bp)});
    return Relation(std::move(minus), std::move(plus), std::move(pairs));
}

Symbol vector_symbol(const std::vector<Symbol>& coords) {
    std::string s = "<";
    for (size_t i = 0; i < coords.size(); ++i) {
        if (i) s += ",";
        s += coords[i];
    }
    return s + ">";
}

namespace {

void all_vectors(const SymbolSet& alphabet, int n, std::vector<Symbol>& cur,
                 std::vector<std::vector<Symbol>>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (const auto& s : alphabet) {
        cur.push_back(s);
        all_vectors(alphabet, n, cur, out);
        cur.pop_back();
    }
}

}  // namespace

Relation power_relation(const Relation& rel, int n) {
    if (n < 1) throw InputError("power relation needs n >= 1");
    std::vector<std::vector<Symbol>> vm, vp;
    std::vector<Symbol> cur;
    all_vectors(rel.minus(), n, cur, vm);
    all_vectors(rel.plus(), n, cur, vp);
    SymbolSet minus, plus;
    for (const auto& v : vm) minus.insert(vector_symbol(v));
    for (const auto& v : vp) plus.insert(vector_symbol(v));

    std::map<Symbol, SymbolSet> om;
    for (const auto& m : rel.minus()) om[m] = omega(rel, Side::Minus, m);

    std::set<Pair> pairs;
    for (const auto& v : vm) {
        for (int k = 0; k < n; ++k) {
            // Choose w[(i+k) mod n] from Omega+(v[i]) for every i.
            std::vector<Symbol> w(n);
            std::function<void(int)> fill = [&](int i) {
                if (i == n) {
                    pairs.insert({vector_symbol(v), vector_symbol(w)});
                    return;
                }
                for (const auto& p : om[v[i]]) {
                    w[(i + k) % n] = p;
                    fill(i + 1);
                }
            };
            fill(0);
        }
    }
    return Relation(std::move(minus), std::move(plus), std::move(pairs));
}

namespace {

// Bipartite graph after merging twin symbols (equal Omega-sets), used for
// canonical labeling. Rows are minus classes, columns plus classes.
struct Reduced {
    std::vector<std::vector<Symbol>> row_members;
    std::vector<std::vector<Symbol>> col_members;
    std::vector<std::vector<char>> adj;  // rows x cols
};

Reduced reduce_twins(const Relation& rel) {
    Reduced r;
    for (const auto& cls : omega_classes(rel, Side::Minus)) r.row_members.emplace_back(cls.begin(), cls.end());
    for (const auto& cls : omega_classes(rel, Side::Plus)) r.col_members.emplace_back(cls.begin(), cls.end());
    r.adj.assign(r.row_members.size(), std::vector<char>(r.col_members.size(), 0));
    for (size_t i = 0; i < r.row_members.size(); ++i)
        for (size_t j = 0; j < r.col_members.size(); ++j)
            r.adj[i][j] = rel.related(r.row_members[i][0], r.col_members[j][0]) ? 1 : 0;
    return r;
}

struct Labeling {
    std::string code;
    std::vector<int> row_order;
    std::vector<int> col_order;
};

// Individualization-refinement search for the lexicographically least encoding.
class CanonicalSearch {
public:
    explicit CanonicalSearch(const Reduced& red) : red_(red) {
        nr_ = static_cast<int>(red.row_members.size());
        nc_ = static_cast<int>(red.col_members.size());
        nbr_.resize(nr_ + nc_);
        for (int i = 0; i < nr_; ++i)
            for (int j = 0; j < nc_; ++j)
                if (red.adj[i][j]) {
                    nbr_[i].push_back(nr_ + j);
                    nbr_[nr_ + j].push_back(i);
                }
    }

    Labeling run() {
        // Initial cells: rows before columns, then by weight.
        std::map<std::pair<int, size_t>, std::vector<int>> init;
        for (int i = 0; i < nr_; ++i) init[{0, red_.row_members[i].size()}].push_back(i);
        for (int j = 0; j < nc_; ++j) init[{1, red_.col_members[j].size()}].push_back(nr_ + j);
        std::vector<std::vector<int>> part;
        for (auto& [_, cell] : init) part.push_back(cell);
        refine(part);
        search(part);
        return best_;
    }

private:
    void refine(std::vector<std::vector<int>>& part) const {
        const int n = nr_ + nc_;
        std::vector<int> cell_of(n);
        for (;;) {
            for (size_t c = 0; c < part.size(); ++c)
                for (int v : part[c]) cell_of[v] = static_cast<int>(c);
            std::vector<std::vector<int>> next;
            bool changed = false;
            for (const auto& cell : part) {
                if (cell.size() == 1) {
                    next.push_back(cell);
                    continue;
                }
                std::map<std::vector<int>, std::vector<int>> split;
                for (int v : cell) {
                    std::vector<int> sig;
                    for (int u : nbr_[v]) sig.push_back(cell_of[u]);
                    std::sort(sig.begin(), sig.end());
                    split[sig].push_back(v);
                }
                if (split.size() > 1) changed = true;
                for (auto& [_, sub] : split) next.push_back(sub);
            }
            part.swap(next);
            if (!changed) return;
        }
    }

    std::string encode(const std::vector<int>& rows, const std::vector<int>& cols) const {
        std::ostringstream os;
        os << nr_ << "x" << nc_ << ":";
        for (size_t i = 0; i < rows.size(); ++i) os << (i ? "," : "") << red_.row_members[rows[i]].size();
        os << ":";
        for (size_t j = 0; j < cols.size(); ++j) os << (j ? "," : "") << red_.col_members[cols[j]].size();
        os << ":";
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i) os << "/";
            for (int c : cols) os << (red_.adj[rows[i]][c] ? '1' : '0');
        }
        return os.str();
    }

    void search(const std::vector<std::vector<int>>& part) {
        size_t target = part.size();
        for (size_t c = 0; c < part.size(); ++c)
            if (part[c].size() > 1) {
                target = c;
                break;
            }
        if (target == part.size()) {
            std::vector<int> rows, cols;
            for (const auto& cell : part) {
                int v = cell[0];
                if (v < nr_) rows.push_back(v);
                else cols.push_back(v - nr_);
            }
            std::string code = encode(rows, cols);
            if (!have_ || code < best_.code) {
                have_ = true;
                best_ = {code, rows, cols};
            }
            return;
        }
        for (int v : part[target]) {
            std::vector<std::vector<int>> child;
            for (size_t c = 0; c < part.size(); ++c) {
                if (c != target) {
                    child.push_back(part[c]);
                    continue;
                }
                child.push_back({v});
                std::vector<int> rest;
                for (int u : part[c])
                    if (u != v) rest.push_back(u);
                child.push_back(rest);
            }
            refine(child);
            search(child);
        }
    }

    const Reduced& red_;
    int nr_ = 0, nc_ = 0;
    std::vector<std::vector<int>> nbr_;
    bool have_ = false;
    Labeling best_;
};

}  // namespace

std::string canonical_encoding(const Relation& rel) {
    Reduced red = reduce_twins(rel);
    return CanonicalSearch(red).run().code;
}

std::optional<RelationIso> are_isomorphic(const Relation& a, const Relation& b) {
    if (a.minus().size() != b.minus().size() || a.plus().size() != b.plus().size() ||
        a.pairs().size() != b.pairs().size())
        return std::nullopt;
    Reduced ra = reduce_twins(a), rb = reduce_twins(b);
    Labeling la = CanonicalSearch(ra).run();
    Labeling lb = CanonicalSearch(rb).run();
    if (la.code != lb.code) return std::nullopt;
    RelationIso iso;
    for (size_t i = 0; i < la.row_order.size(); ++i) {
        const auto& ma = ra.row_members[la.row_order[i]];
        const auto& mb = rb.row_members[lb.row_order[i]];
        for (size_t k = 0; k < ma.size(); ++k) iso.minus_map[ma[k]] = mb[k];
    }
    for (size_t j = 0; j < la.col_order.size(); ++j) {
        const auto& ma = ra.col_members[la.col_order[j]];
        const auto& mb = rb.col_members[lb.col_order[j]];
        for (size_t k = 0; k < ma.size(); ++k) iso.plus_map[ma[k]] = mb[k];
    }
    return iso;
}

IsoClassVector mu_vector(const Relation& rel) {
    IsoClassVector mu;
    for (const auto& piece : decompose(rel)) ++mu[canonical_encoding(piece)];
    return mu;
}

IsoClassVector mu_add(const IsoClassVector& a, const IsoClassVector& b) {
    IsoClassVector out = a;
    for (const auto& [k, v] : b) out[k] += v;
    return out;
}

std::string to_string(const Relation& rel) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [m, p] : rel.pairs()) {
        os << (first ? "" : ",") << "(" << m << "," << p << ")";
        first = false;
    }
    os << "}";
    return os.str();
}

}  // namespace rgs
