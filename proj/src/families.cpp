#include "rgs/families.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "rgs/error.hpp"

namespace rgs {

std::string kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::G_p: return "G_p";
        case FamilyKind::G_pq: return "G_pq";
        case FamilyKind::Gplus_pqr: return "Gplus_pqr";
        case FamilyKind::G0_pqr: return "G0_pqr";
        case FamilyKind::Gplus_pq01: return "Gplus_pq01";
        case FamilyKind::G0_pq01: return "G0_pq01";
    }
    return "?";
}

FamilyKind parse_kind(const std::string& s) {
    for (auto k : {FamilyKind::G_p, FamilyKind::G_pq, FamilyKind::Gplus_pqr, FamilyKind::G0_pqr,
                   FamilyKind::Gplus_pq01, FamilyKind::G0_pq01})
        if (kind_name(k) == s) return k;
    throw InputError("unknown family kind '" + s + "'");
}

std::vector<std::string> kind_roles(FamilyKind k) {
    switch (k) {
        case FamilyKind::G_p: return {"p"};
        case FamilyKind::G_pq: return {"p", "q"};
        case FamilyKind::Gplus_pqr:
        case FamilyKind::G0_pqr: return {"p", "q", "r"};
        case FamilyKind::Gplus_pq01:
        case FamilyKind::G0_pq01: return {"p", "q0", "q1"};
    }
    return {};
}

namespace {

bool is_q01(FamilyKind k) { return k == FamilyKind::Gplus_pq01 || k == FamilyKind::G0_pq01; }
bool is_pqr(FamilyKind k) { return k == FamilyKind::Gplus_pqr || k == FamilyKind::G0_pqr; }

std::vector<std::string> q_roles(FamilyKind k) {
    if (is_q01(k)) return {"q0", "q1"};
    if (k == FamilyKind::G_p) return {};
    return {"q"};
}

Relation block_of(const RGraph& g, const RoleMap& roles, const std::string& x, const std::string& y) {
    return g.block(roles.at(x), roles.at(y));
}

long lsize(const SymbolSet& s) { return static_cast<long>(s.size()); }

}  // namespace

RGraph family_graph(FamilyKind kind, const FamilyComponents& blocks) {
    auto roles = kind_roles(kind);
    std::set<std::string> rs(roles.begin(), roles.end());
    std::vector<Edge> minus, plus;
    std::set<Pair> pairs;
    for (const auto& [xy, spec] : blocks) {
        const auto& [x, y] = xy;
        if (!rs.count(x) || !rs.count(y))
            throw InputError("block (" + x + "," + y + ") uses a role outside " + kind_name(kind));
        if (spec.minus < 0 || spec.plus < 0) throw InputError("negative edge count in block (" + x + "," + y + ")");
        auto mid = [&](int i) { return x + "_" + y + "-" + std::to_string(i); };
        auto pid = [&](int i) { return x + "_" + y + "+" + std::to_string(i); };
        for (int i = 0; i < spec.minus; ++i) minus.push_back({mid(i), x, y});
        for (int i = 0; i < spec.plus; ++i) plus.push_back({pid(i), y, x});
        if (spec.full) {
            for (int i = 0; i < spec.minus; ++i)
                for (int j = 0; j < spec.plus; ++j) pairs.insert({mid(i), pid(j)});
        } else {
            for (const auto& [i, j] : spec.pairs) {
                if (i < 0 || i >= spec.minus || j < 0 || j >= spec.plus)
                    throw InputError("pair index out of range in block (" + x + "," + y + ")");
                pairs.insert({mid(i), pid(j)});
            }
        }
    }
    return RGraph(roles, minus, plus, pairs);
}

FamilyComponents family_components(const FamilyInstance& f) {
    FamilyComponents out;
    for (const auto& x : kind_roles(f.kind))
        for (const auto& y : kind_roles(f.kind)) {
            Relation rel = family_block(f, x, y);
            if (rel.minus().empty() && rel.plus().empty()) continue;
            BlockSpec spec;
            spec.minus = static_cast<int>(rel.minus().size());
            spec.plus = static_cast<int>(rel.plus().size());
            std::vector<Symbol> ms(rel.minus().begin(), rel.minus().end()), ps(rel.plus().begin(), rel.plus().end());
            for (const auto& [m, p] : rel.pairs()) {
                int i = static_cast<int>(std::find(ms.begin(), ms.end(), m) - ms.begin());
                int j = static_cast<int>(std::find(ps.begin(), ps.end(), p) - ps.begin());
                spec.pairs.insert({i, j});
            }
            out[{x, y}] = spec;
        }
    return out;
}

std::vector<std::string> family_violations(FamilyKind kind, const RGraph& g, const RoleMap& roles) {
    std::vector<std::string> out;
    auto want = kind_roles(kind);
    for (const auto& r : want)
        if (!roles.count(r)) out.push_back("role " + r + " is not assigned");
    if (!out.empty()) return out;
    std::set<Vertex> assigned;
    for (const auto& r : want) {
        if (!g.has_vertex(roles.at(r))) out.push_back("role " + r + " names an unknown vertex");
        assigned.insert(roles.at(r));
    }
    if (assigned.size() != want.size()) out.push_back("roles must name distinct vertices");
    if (g.vertices().size() != want.size()) out.push_back("graph must have exactly the role vertices");
    if (!out.empty()) return out;
    for (const auto& msg : validate(g)) out.push_back(msg);

    auto rel = [&](const std::string& x, const std::string& y) { return block_of(g, roles, x, y); };
    auto name = [](const std::string& x, const std::string& y) { return "(" + x + "," + y + ")"; };
    auto require_empty = [&](const std::string& x, const std::string& y) {
        if (!rel(x, y).minus().empty()) out.push_back("E-" + name(x, y) + " must be empty");
    };
    auto require_nonempty = [&](const std::string& x, const std::string& y) {
        if (rel(x, y).minus().empty()) out.push_back("E-" + name(x, y) + " must be non-empty");
    };
    auto require_full = [&](const std::string& x, const std::string& y) {
        require_nonempty(x, y);
        Relation r = rel(x, y);
        if (r.pairs().size() != r.minus().size() * r.plus().size())
            out.push_back("R" + name(x, y) + " must be the full relation E-" + name(x, y) + " x E+" + name(x, y));
    };
    enum class Rho { Circle, Nabla, CircleTriangle };
    auto rho_ok = [&](const std::string& x, const std::string& y, Rho want) {
        Relation r = rel(x, y);
        if (r.minus().empty() || r.plus().empty()) {
            out.push_back("R" + name(x, y) + " must have non-empty sides");
            return;
        }
        RhoFlags fl = rho_flags(r);
        if (want == Rho::Circle && !fl.circle) out.push_back("R" + name(x, y) + " must have no full rows or columns");
        if (want == Rho::Nabla && !fl.nabla)
            out.push_back("R" + name(x, y) + " must have class sizes with pairwise gcd 1 on both sides");
        if (want == Rho::CircleTriangle && !fl.circle_nabla)
            out.push_back("R" + name(x, y) +
                          " must have no full rows or columns and pairwise class gcds equal to the overall gcd");
    };
    const bool loops = !rel("p", "p").minus().empty();
    switch (kind) {
        case FamilyKind::G_p:
            require_nonempty("p", "p");
            if (loops) rho_ok("p", "p", Rho::Circle);
            break;
        case FamilyKind::G_pq:
            require_empty("q", "q");
            require_full("p", "q");
            require_nonempty("q", "p");
            rho_ok("q", "p", loops ? Rho::Nabla : Rho::CircleTriangle);
            break;
        case FamilyKind::Gplus_pqr:
            for (auto [x, y] : std::vector<std::pair<std::string, std::string>>{{"q", "q"}, {"r", "r"}, {"p", "r"}, {"r", "q"}})
                require_empty(x, y);
            require_full("p", "q");
            require_full("q", "r");
            rho_ok("q", "p", Rho::Nabla);
            rho_ok("r", "p", Rho::Nabla);
            break;
        case FamilyKind::G0_pqr:
            for (auto [x, y] :
                 std::vector<std::pair<std::string, std::string>>{{"q", "q"}, {"r", "r"}, {"p", "r"}, {"r", "q"}, {"q", "p"}})
                require_empty(x, y);
            require_full("p", "q");
            require_full("q", "r");
            require_nonempty("r", "p");
            rho_ok("r", "p", loops ? Rho::Nabla : Rho::CircleTriangle);
            break;
        case FamilyKind::Gplus_pq01:
        case FamilyKind::G0_pq01: {
            for (auto [x, y] : std::vector<std::pair<std::string, std::string>>{
                     {"q0", "q1"}, {"q1", "q0"}, {"q0", "q0"}, {"q1", "q1"}})
                require_empty(x, y);
            require_full("p", "q0");
            require_full("p", "q1");
            rho_ok("q0", "p", Rho::Nabla);
            rho_ok("q1", "p", Rho::Nabla);
            long m0 = lsize(rel("p", "q0").minus()), m1 = lsize(rel("p", "q1").minus());
            long p0 = lsize(rel("p", "q0").plus()), p1 = lsize(rel("p", "q1").plus());
            if (kind == FamilyKind::Gplus_pq01) {
                if (!(std::make_pair(m0, m1) > std::make_pair(p0, p1)))
                    out.push_back("(card E-(p,q0), card E-(p,q1)) must be lexicographically larger than "
                                  "(card E+(p,q0), card E+(p,q1))");
            } else {
                if (m0 != m1) out.push_back("card E-(p,q0) must equal card E-(p,q1)");
                if (p0 != p1) out.push_back("card E+(p,q0) must equal card E+(p,q1)");
            }
            break;
        }
    }
    return out;
}

FamilyInstance make_family(FamilyKind kind, const RGraph& g, RoleMap roles) {
    auto bad = family_violations(kind, g, roles);
    if (!bad.empty()) {
        std::string msg = kind_name(kind) + " constraints violated:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw InputError(msg);
    }
    return FamilyInstance{kind, g, std::move(roles)};
}

FamilyInstance make_family(FamilyKind kind, const FamilyComponents& blocks) {
    RoleMap roles;
    for (const auto& r : kind_roles(kind)) roles[r] = r;
    return make_family(kind, family_graph(kind, blocks), roles);
}

SymbolSet family_minus(const FamilyInstance& f, const std::string& x, const std::string& y) {
    return family_block(f, x, y).minus();
}

SymbolSet family_plus(const FamilyInstance& f, const std::string& x, const std::string& y) {
    return family_block(f, x, y).plus();
}

Relation family_block(const FamilyInstance& f, const std::string& x, const std::string& y) {
    return block_of(f.graph, f.roles, x, y);
}

namespace {

Relation index_relation(int m, int n, const std::set<std::pair<int, int>>& pairs) {
    SymbolSet ms, ps;
    std::set<Pair> prs;
    for (int i = 0; i < m; ++i) ms.insert("m" + std::to_string(i));
    for (int j = 0; j < n; ++j) ps.insert("p" + std::to_string(j));
    for (const auto& [i, j] : pairs) prs.insert({"m" + std::to_string(i), "p" + std::to_string(j)});
    return Relation(ms, ps, prs);
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random relation on m x n indices accepted by pred.
BlockSpec random_block(std::mt19937_64& rng, int m, int n, const std::function<bool(const RhoFlags&)>& pred) {
    for (int attempt = 0; attempt < 4000; ++attempt) {
        std::set<std::pair<int, int>> pairs;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (std::bernoulli_distribution(0.5)(rng)) pairs.insert({i, j});
        if (pred(rho_flags(index_relation(m, n, pairs)))) return BlockSpec{m, n, false, pairs};
    }
    throw IntegrityError("no random relation of size " + std::to_string(m) + "x" + std::to_string(n) +
                         " with the requested type");
}

BlockSpec full_block(int m, int n) { return BlockSpec{m, n, true, {}}; }

bool links_defined(const RGraph& g) {
    for (const auto& rep : check_abcd_conditions(g))
        if ((rep.condition == "b-" || rep.condition == "b+") && !rep.holds) return false;
    return true;
}

}  // namespace

FamilyInstance random_family(FamilyKind kind, std::mt19937_64& rng, int max_block, int loops) {
    if (max_block < 1) throw InputError("max_block must be positive");
    auto nabla = [](const RhoFlags& f) { return f.nabla; };
    auto circle_nabla = [](const RhoFlags& f) { return f.circle_nabla; };
    auto circle = [](const RhoFlags& f) { return f.circle; };
    auto side = [&]() { return uniform(rng, 1, max_block); };
    for (int attempt = 0; attempt < 500; ++attempt) {
        bool with_loops = loops < 0 ? std::bernoulli_distribution(0.5)(rng) : loops > 0;
        if (kind == FamilyKind::G_p) with_loops = true;
        FamilyComponents c;
        if (with_loops) {
            // A 1x1 circle relation is empty; prefer at least two loops each way.
            int m = std::max(2, side()), n = std::max(2, side());
            c[{"p", "p"}] = random_block(rng, m, n, circle);
        }
        try {
            switch (kind) {
                case FamilyKind::G_p: break;
                case FamilyKind::G_pq:
                    c[{"p", "q"}] = full_block(side(), side());
                    c[{"q", "p"}] = random_block(rng, side(), side(), with_loops ? nabla : circle_nabla);
                    break;
                case FamilyKind::Gplus_pqr:
                    c[{"p", "q"}] = full_block(side(), side());
                    c[{"q", "r"}] = full_block(side(), side());
                    c[{"q", "p"}] = random_block(rng, side(), side(), nabla);
                    c[{"r", "p"}] = random_block(rng, side(), side(), nabla);
                    break;
                case FamilyKind::G0_pqr:
                    c[{"p", "q"}] = full_block(side(), side());
                    c[{"q", "r"}] = full_block(side(), side());
                    c[{"r", "p"}] = random_block(rng, side(), side(), with_loops ? nabla : circle_nabla);
                    break;
                case FamilyKind::Gplus_pq01:
                case FamilyKind::G0_pq01: {
                    int m0 = side(), p0 = side(), m1 = side(), p1 = side();
                    if (kind == FamilyKind::G0_pq01) {
                        m1 = m0;
                        p1 = p0;
                    } else if (!(std::make_pair(m0, m1) > std::make_pair(p0, p1))) {
                        continue;
                    }
                    c[{"p", "q0"}] = full_block(m0, p0);
                    c[{"p", "q1"}] = full_block(m1, p1);
                    c[{"q0", "p"}] = random_block(rng, side(), side(), nabla);
                    c[{"q1", "p"}] = random_block(rng, side(), side(), nabla);
                    break;
                }
            }
        } catch (const IntegrityError&) {
            continue;
        }
        RGraph g = family_graph(kind, c);
        RoleMap roles;
        for (const auto& r : kind_roles(kind)) roles[r] = r;
        if (!family_violations(kind, g, roles).empty()) continue;
        if (!links_defined(g)) continue;
        return FamilyInstance{kind, g, roles};
    }
    throw IntegrityError("could not generate a " + kind_name(kind) + " instance");
}

Measured measure(const RGraph& g, int depth, const std::vector<std::pair<int, int>>& link_lengths,
                 const QuotientData* q, P1Mode mode) {
    Presentation pres = identity_presentation(g);
    Measured m;
    m.census = census(pres, depth, 0, q);
    for (const auto& [k, l] : link_lengths) m.links[{k, l}] = link_relation(pres, m.census, k, l, mode);
    return m;
}

int family_census_depth(const FamilyInstance& f) {
    switch (f.kind) {
        case FamilyKind::G_p:
        case FamilyKind::G_pq:
        case FamilyKind::Gplus_pq01: return 2;
        default: return 3;
    }
}

std::vector<std::pair<int, int>> family_link_lengths(const FamilyInstance& f) {
    std::vector<std::pair<int, int>> out{{1, 1}, {2, 2}};
    if (is_pqr(f.kind)) out.push_back({3, 3});
    return out;
}

const InvariantEntry* InvariantReport::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

bool InvariantReport::all_match() const {
    for (const auto& e : entries)
        if (e.match && !*e.match) return false;
    return true;
}

namespace {

// True iff some rotation of w reads s_0 s_1 ... with w[i] in s_i.
bool cyclic_in(const Word& w, const std::vector<SymbolSet>& seq) {
    if (w.size() != seq.size()) return false;
    const size_t n = w.size();
    for (size_t r = 0; r < n; ++r) {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) ok = seq[i].count(w[(r + i) % n]) != 0;
        if (ok) return true;
    }
    return false;
}

const Relation& link_at(const LinkRelations& links, int k, int l) {
    auto it = links.find({k, l});
    if (it == links.end())
        throw InputError("link relation for lengths " + std::to_string(k) + "," + std::to_string(l) + " is missing");
    return it->second;
}

std::map<std::string, const Orbit*> orbits_by_name(const OrbitCensus& c) {
    std::map<std::string, const Orbit*> out;
    for (const auto& o : c.orbits) out[orbit_name(o)] = &o;
    return out;
}

// R_n restricted to orbits reading the given cycles; one (minus, plus) cycle pair per group.
Relation restrict_to_cycles(const Relation& Rn, const OrbitCensus& c,
                            const std::vector<std::pair<std::vector<SymbolSet>, std::vector<SymbolSet>>>& groups) {
    auto by_name = orbits_by_name(c);
    SymbolSet ms, ps;
    std::set<Pair> pairs;
    std::vector<std::pair<SymbolSet, SymbolSet>> sides;
    for (const auto& [mseq, pseq] : groups) {
        SymbolSet gm, gp;
        for (const auto& m : Rn.minus())
            if (cyclic_in(by_name.at(m)->word, mseq)) gm.insert(m);
        for (const auto& p : Rn.plus())
            if (cyclic_in(by_name.at(p)->word, pseq)) gp.insert(p);
        for (const auto& [m, p] : Rn.pairs())
            if (gm.count(m) && gp.count(p)) pairs.insert({m, p});
        ms.insert(gm.begin(), gm.end());
        ps.insert(gp.begin(), gp.end());
    }
    return Relation(ms, ps, pairs);
}

std::string mu_string(const IsoClassVector& v) {
    std::string s = "{";
    bool first = true;
    for (const auto& [enc, n] : v) {
        s += (first ? "" : ", ") + enc + ": " + std::to_string(n);
        first = false;
    }
    return s + "}";
}

IsoClassVector scaled(const IsoClassVector& v, long k) {
    IsoClassVector out;
    for (const auto& [enc, n] : v) out[enc] = n * k;
    return out;
}

}  // namespace

Relation family_Q(const FamilyInstance& f, int n, const OrbitCensus& census, const LinkRelations& links) {
    if (n != 2 && n != 3) throw ScopeError("Q is defined for cycle length 2 or 3 only");
    if (n == 2) {
        if (f.kind == FamilyKind::G_p) throw ScopeError("Q2 is not defined for G_p");
        std::vector<std::pair<std::vector<SymbolSet>, std::vector<SymbolSet>>> groups;
        for (const auto& q : q_roles(f.kind))
            groups.push_back({{family_minus(f, "p", q), family_minus(f, q, "p")},
                              {family_plus(f, q, "p"), family_plus(f, "p", q)}});
        return restrict_to_cycles(link_at(links, 2, 2), census, groups);
    }
    if (!is_pqr(f.kind)) throw ScopeError("Q3 is defined for Gplus_pqr and G0_pqr only");
    return restrict_to_cycles(
        link_at(links, 3, 3), census,
        {{{family_minus(f, "p", "q"), family_minus(f, "q", "r"), family_minus(f, "r", "p")},
          {family_plus(f, "r", "p"), family_plus(f, "q", "r"), family_plus(f, "p", "q")}}});
}

std::pair<IsoClassVector, IsoClassVector> halving_identity_sides(const FamilyInstance& f, const OrbitCensus& census,
                                                                 const LinkRelations& links) {
    const Relation& R2 = link_at(links, 2, 2);
    Relation Q2 = family_Q(f, 2, census, links);
    SymbolSet ms, ps;
    for (const auto& m : R2.minus())
        if (!Q2.minus().count(m)) ms.insert(m);
    for (const auto& p : R2.plus())
        if (!Q2.plus().count(p)) ps.insert(p);
    IsoClassVector lhs = scaled(mu_vector(R2.restrict(ms, ps)), 2);
    IsoClassVector rhs = mu_vector(power_relation(link_at(links, 1, 1), 2));
    return {lhs, rhs};
}

namespace {

struct ReportBuilder {
    InvariantReport rep;
    bool measured;

    void equality(const std::string& key, long predicted, std::optional<long> value, const std::string& detail = "") {
        InvariantEntry e{key, "equality", std::to_string(predicted), "", detail, std::nullopt};
        if (measured && value) {
            e.measured = std::to_string(*value);
            e.match = *value == predicted;
        }
        rep.entries.push_back(e);
    }
    // lhs op rhs, both sides measured.
    void inequality(const std::string& key, std::optional<long> lhs, std::optional<long> rhs, const std::string& op) {
        InvariantEntry e{key, "inequality", "", "", "", std::nullopt};
        if (measured && lhs && rhs) {
            e.measured = std::to_string(*lhs);
            e.predicted = op + " " + std::to_string(*rhs);
            e.match = op == ">" ? *lhs > *rhs : *lhs == *rhs;
        }
        rep.entries.push_back(e);
    }
    void relation(const std::string& key, const std::string& predicted, std::optional<std::string> value,
                  const std::string& detail = "") {
        InvariantEntry e{key, "relation", predicted, "", detail, std::nullopt};
        if (measured && value) {
            e.measured = *value;
            e.match = *value == predicted;
        }
        rep.entries.push_back(e);
    }
};

long class_gcd(const Relation& r, Side side) {
    long g = 0;
    for (const auto& c : omega_classes(r, side)) g = std::gcd(g, static_cast<long>(c.size()));
    return g;
}

InvariantReport build_report(const FamilyInstance& f, const OrbitCensus* census, const LinkRelations* links) {
    const bool have = census != nullptr;
    if (have && census->max_len < family_census_depth(f))
        throw InputError("census depth " + std::to_string(census->max_len) + " is below the " +
                         std::to_string(family_census_depth(f)) + " needed for " + kind_name(f.kind));
    ReportBuilder b{{kind_name(f.kind), {}}, have};
    auto I = [&](const std::map<int, long>& m, int k) -> std::optional<long> {
        if (!have) return std::nullopt;
        auto it = m.find(k);
        return it == m.end() ? std::optional<long>() : it->second;
    };
    auto Im = [&](int k) { return I(census->I_minus, k); };
    auto I0 = [&](int k) { return I(census->I_zero, k); };
    auto lift = [&](auto fn) -> std::optional<long> {
        if (!have) return std::nullopt;
        return fn();
    };

    const Relation Rpp = family_block(f, "p", "p");
    const long n = lsize(Rpp.minus());
    const long cR1 = static_cast<long>(Rpp.pairs().size());
    const bool loops = n > 0;

    b.equality("I-1 = card E-(p,p)", n, Im(1));
    std::optional<std::string> r1enc;
    if (have) r1enc = canonical_encoding(link_at(*links, 1, 1));
    b.relation("R1 iso R(p,p)", canonical_encoding(Rpp), r1enc);

    auto i1 = Im(1), i2 = Im(2), i3 = Im(3);
    auto ipow = lift([&] { return *i1 * (*i1 - 1); });
    auto card_R1 = lift([&] { return static_cast<long>(link_at(*links, 1, 1).pairs().size()); });

    std::optional<Relation> Q2;
    if (have && f.kind != FamilyKind::G_p) Q2 = family_Q(f, 2, *census, *links);
    auto q2_flags = [&]() -> std::optional<RhoFlags> {
        if (!Q2 || Q2->minus().empty() || Q2->plus().empty()) return std::nullopt;
        return rho_flags(*Q2);
    };
    auto bool_str = [](bool x) { return std::string(x ? "true" : "false"); };
    auto q2_triangle = [&]() -> std::optional<std::string> {
        if (!have) return std::nullopt;
        auto fl = q2_flags();
        return bool_str(fl && fl->triangle);
    };
    // card Q2 / (D- D+) + D- D+ with the gcds of the measured Q2.
    auto q2_terms = [&](long neutral_factor) -> std::optional<long> {
        if (!Q2 || Q2->minus().empty() || Q2->plus().empty()) return std::nullopt;
        long dm = class_gcd(*Q2, Side::Minus), dp = class_gcd(*Q2, Side::Plus);
        return static_cast<long>(Q2->pairs().size()) / (dm * dp) + neutral_factor * dm * dp;
    };
    auto halving = [&]() {
        std::optional<std::string> lhs;
        std::string rhs;
        if (have) {
            auto [l, r] = halving_identity_sides(f, *census, *links);
            lhs = mu_string(l);
            rhs = mu_string(r);
        } else {
            rhs = mu_string(mu_vector(power_relation(Rpp, 2)));
        }
        b.relation("2 mu(R2 - Q2) = mu(R1<2>)", rhs, lhs, "multiplicity vectors keyed by canonical encoding");
    };
    // Negative length-3 orbits reading a loop at p followed by a matched visit to a neighbour q.
    auto o31 = [&]() -> std::optional<long> {
        if (!have) return std::nullopt;
        const auto qs = q_roles(f.kind);
        long count = 0;
        for (const auto& o : census->orbits) {
            if (o.length != 3 || o.cls != OrbitClass::Negative) continue;
            for (const auto& q : qs) {
                if (cyclic_in(o.word, {family_minus(f, "p", "p"), family_minus(f, "p", q), family_plus(f, "p", q)})) {
                    ++count;
                    break;
                }
            }
        }
        return count;
    };
    auto i3_bound = [&](long c) -> std::optional<long> {
        if (!have || !i1 || !i2) return std::nullopt;
        long a = *i1;
        return (*i2 - (a - 1) * (a - 1)) * a + c * a + a * (a - 1) * (a - 2) / 3;
    };
    auto q_product_iso = [&](const Relation& Q, const SymbolSet& em, const SymbolSet& ep, const Relation& base)
        -> std::pair<std::string, std::optional<std::string>> {
        std::string pred = canonical_encoding(kronecker_product(Relation::full(em, ep), base));
        std::optional<std::string> meas;
        if (have) meas = canonical_encoding(Q);
        return {pred, meas};
    };

    switch (f.kind) {
        case FamilyKind::G_p:
            b.equality("I-2 = I-1(I-1 - 1)", n * (n - 1), i2);
            b.equality("I0-2 = card R1", cR1, I0(2));
            break;
        case FamilyKind::G_pq:
        case FamilyKind::Gplus_pqr: {
            const long am = lsize(family_minus(f, "p", "q")), ap = lsize(family_plus(f, "p", "q"));
            const Relation Rqp = family_block(f, "q", "p");
            b.inequality("I-2 > I-1(I-1 - 1)", i2, ipow, ">");
            if (f.kind == FamilyKind::G_pq) {
                b.equality("I0-2 = card R1 + card Q2/(D-(Q2) D+(Q2)) + D-(Q2) D+(Q2)",
                           cR1 + static_cast<long>(Rqp.pairs().size()) + am * ap, I0(2));
            } else {
                auto rhs = lift([&] { return *card_R1 + q2_terms(1).value_or(0); });
                b.inequality("I0-2 > card R1 + card Q2/(D-(Q2) D+(Q2)) + D-(Q2) D+(Q2)", I0(2), rhs, ">");
            }
            b.relation("Q2 in rho-triangle", "true", q2_triangle());
            b.equality("D-(Q2) = card E-(p,q)", am, lift([&] { return Q2 && !Q2->minus().empty() ? class_gcd(*Q2, Side::Minus) : 0L; }));
            b.equality("D+(Q2) = card E+(p,q)", ap, lift([&] { return Q2 && !Q2->plus().empty() ? class_gcd(*Q2, Side::Plus) : 0L; }));
            auto [pe, me] = q_product_iso(Q2 ? *Q2 : Relation(), family_minus(f, "p", "q"), family_plus(f, "p", "q"), Rqp);
            b.relation("Q2 iso full(E-(p,q), E+(p,q)) x R(q,p)", pe, me);
            halving();
            if (f.kind == FamilyKind::Gplus_pqr) {
                if (loops) {
                    b.equality("card O3,1 = card E-(p,q) card E+(p,q)", am * ap, o31());
                    b.inequality("I-3 > (I-2 - (I-1 - 1)^2) I-1 + card E-(p,q) card E+(p,q) I-1 + I-1(I-1 - 1)(I-1 - 2)/3",
                                 i3, i3_bound(am * ap), ">");
                } else {
                    b.inequality("I-3 > 0", i3, lift([] { return 0L; }), ">");
                }
            }
            break;
        }
        case FamilyKind::G0_pqr: {
            const long amq = lsize(family_minus(f, "p", "q")), apq = lsize(family_plus(f, "p", "q"));
            const long amr = lsize(family_minus(f, "q", "r")), apr = lsize(family_plus(f, "q", "r"));
            const Relation Rrp = family_block(f, "r", "p");
            b.equality("I-2 = I-1(I-1 - 1)", n * (n - 1), i2);
            b.inequality("I0-2 > card R1", I0(2), card_R1, ">");
            if (!loops) {
                b.equality("I0-2 - card R(r,p) = A-pq A+pq + A+qr A-qr", amq * apq + apr * amr,
                           lift([&] { return *I0(2) - static_cast<long>(Rrp.pairs().size()); }));
            } else {
                b.equality("card O3,1 = card E-(p,p) A-pq A+pq", n * amq * apq, o31());
            }
            std::optional<Relation> Q3;
            if (have) Q3 = family_Q(f, 3, *census, *links);
            auto q3_ok = [&] { return Q3 && !Q3->minus().empty() && !Q3->plus().empty(); };
            b.relation("Q3 in rho-triangle", "true", lift([&] { return 0L; }) ? std::optional<std::string>(bool_str(q3_ok() && rho_flags(*Q3).triangle)) : std::nullopt);
            b.equality("D-(Q3) = A-pq A-qr", amq * amr, lift([&] { return q3_ok() ? class_gcd(*Q3, Side::Minus) : 0L; }));
            b.equality("D+(Q3) = A+qr A+pq", apr * apq, lift([&] { return q3_ok() ? class_gcd(*Q3, Side::Plus) : 0L; }));
            SymbolSet em, ep;
            for (const auto& x : family_minus(f, "p", "q"))
                for (const auto& y : family_minus(f, "q", "r")) em.insert(x + "." + y);
            for (const auto& x : family_plus(f, "q", "r"))
                for (const auto& y : family_plus(f, "p", "q")) ep.insert(x + "." + y);
            auto [pe, me] = q_product_iso(Q3 ? *Q3 : Relation(), em, ep, Rrp);
            b.relation("Q3 iso full(A-pq A-qr, A+qr A+pq) x R(r,p)", pe, me);
            halving();
            break;
        }
        case FamilyKind::Gplus_pq01:
        case FamilyKind::G0_pq01: {
            const long am = lsize(family_minus(f, "p", "q0")), ap = lsize(family_plus(f, "p", "q0"));
            b.inequality("I-2 > I-1(I-1 - 1)", i2, ipow, ">");
            if (f.kind == FamilyKind::Gplus_pq01) {
                b.relation("Q2 in rho-triangle", "false", q2_triangle());
                halving();
                break;
            }
            const Relation R0 = family_block(f, "q0", "p"), R1 = family_block(f, "q1", "p");
            b.equality("I0-2 = card R1 + card Q2/(D-(Q2) D+(Q2)) + 2 D-(Q2) D+(Q2)",
                       cR1 + static_cast<long>(R0.pairs().size() + R1.pairs().size()) + 2 * am * ap, I0(2));
            b.relation("Q2 in rho-triangle", "true", q2_triangle());
            b.equality("D-(Q2) = card E-(p,q0)", am, lift([&] { return Q2 && !Q2->minus().empty() ? class_gcd(*Q2, Side::Minus) : 0L; }));
            b.equality("D+(Q2) = card E+(p,q0)", ap, lift([&] { return Q2 && !Q2->plus().empty() ? class_gcd(*Q2, Side::Plus) : 0L; }));
            SymbolSet em, ep;
            for (int i = 0; i < am; ++i) em.insert("m" + std::to_string(i));
            for (int j = 0; j < ap; ++j) ep.insert("p" + std::to_string(j));
            auto [pe, me] = q_product_iso(Q2 ? *Q2 : Relation(), em, ep, kronecker_sum({R0, R1}));
            b.relation("Q2 iso full(E-(p,q0), E+(p,q0)) x (R(q0,p) + R(q1,p))", pe, me);
            halving();
            if (loops) {
                b.equality("card O3,1 = 2 card E-(p,q0) card E+(p,q0)", 2 * am * ap, o31());
                b.inequality(
                    "I-3 > (I-2 - (I-1 - 1)^2) I-1 + 2 card E-(p,q0) card E+(p,q0) I-1 + I-1(I-1 - 1)(I-1 - 2)/3", i3,
                    i3_bound(2 * am * ap), ">");
            } else {
                b.equality("I-3 = 0", 0, i3);
            }
            break;
        }
    }
    return b.rep;
}

}  // namespace

InvariantReport predicted_invariants(const FamilyInstance& f) { return build_report(f, nullptr, nullptr); }

InvariantReport check_invariants(const FamilyInstance& f, const OrbitCensus& census, const LinkRelations& links) {
    return build_report(f, &census, &links);
}

std::optional<Word> apply_recipe(const SlidingBlockRecipe& r, const Word& w) {
    Word out;
    out.reserve(w.size());
    for (size_t i = 0; i < w.size();) {
        const Symbol& s = w[i];
        if (r.entering.count(s)) {
            if (i + 1 >= w.size()) return std::nullopt;
            auto it = r.two_block.find({s, w[i + 1]});
            if (it == r.two_block.end()) return std::nullopt;
            out.push_back(it->second.first);
            out.push_back(it->second.second);
            i += 2;
            continue;
        }
        if (r.leaving.count(s)) return std::nullopt;
        auto it = r.one_block.find(s);
        if (it == r.one_block.end()) return std::nullopt;
        out.push_back(it->second);
        ++i;
    }
    return out;
}

namespace {

// Reduction state of a path read left to right; open holds uncancelled minus edges.
struct Walk {
    Vertex cur;
    bool started = false;
    std::vector<Symbol> open;
};

bool step(const RGraph& g, Walk& w, const Symbol& s) {
    const bool minus = g.is_minus(s);
    if (!minus && !g.is_plus(s)) return false;
    const Edge& e = minus ? g.minus_edge(s) : g.plus_edge(s);
    if (w.started && w.cur != e.source) return false;
    if (minus) {
        w.open.push_back(s);
    } else if (!w.open.empty()) {
        if (!g.related(w.open.back(), s)) return false;
        w.open.pop_back();
    }
    w.cur = e.target;
    w.started = true;
    return true;
}

bool path_admissible(const RGraph& g, const Word& word) {
    Walk w;
    for (const auto& s : word)
        if (!step(g, w, s)) return false;
    return true;
}

std::map<Vertex, std::vector<Symbol>> out_symbols(const RGraph& g) {
    std::map<Vertex, std::vector<Symbol>> out;
    for (const auto& e : g.minus_edges()) out[e.source].push_back(e.id);
    for (const auto& e : g.plus_edges()) out[e.source].push_back(e.id);
    for (auto& [v, l] : out) std::sort(l.begin(), l.end());
    return out;
}

// Calls visit(word) on every admissible word of length 1..max_len; stops when visit returns false.
template <class F>
bool enumerate_admissible(const RGraph& g, int max_len, F&& visit) {
    const auto out = out_symbols(g);
    std::vector<Symbol> all;
    for (const auto& [v, l] : out) all.insert(all.end(), l.begin(), l.end());
    Word word;
    std::function<bool(const Walk&)> rec = [&](const Walk& w) -> bool {
        if (static_cast<int>(word.size()) == max_len) return true;
        auto it = out.find(w.cur);
        const std::vector<Symbol>& next = w.started ? (it == out.end() ? std::vector<Symbol>{} : it->second) : all;
        for (const auto& s : next) {
            Walk n = w;
            if (!step(g, n, s)) continue;
            word.push_back(s);
            bool go = visit(static_cast<const Word&>(word)) && rec(n);
            word.pop_back();
            if (!go) return false;
        }
        return true;
    };
    return rec(Walk{});
}

bool cuts(const Word& w, const std::set<Symbol>& entering, const std::set<Symbol>& leaving) {
    return leaving.count(w.front()) || entering.count(w.back());
}

}  // namespace

RecipeCheck verify_recipe(const RGraph& from, const RGraph& to, const SlidingBlockRecipe& r, int max_len) {
    RecipeCheck rc;
    rc.max_len = max_len;
    std::set<Symbol> img_entering, img_leaving;
    for (const auto& [k, v] : r.two_block) {
        img_entering.insert(v.first);
        img_leaving.insert(v.second);
    }
    std::vector<std::unordered_set<std::string>> images(max_len + 1);
    std::vector<long> from_count(max_len + 1, 0), to_count(max_len + 1, 0);
    bool ok = enumerate_admissible(from, max_len, [&](const Word& w) {
        if (cuts(w, r.entering, r.leaving)) return true;
        auto img = apply_recipe(r, w);
        if (!img) {
            rc.failure = "no image for " + join_word(w);
            return false;
        }
        if (!path_admissible(to, *img)) {
            rc.failure = "image of " + join_word(w) + " is not admissible: " + join_word(*img);
            return false;
        }
        if (cuts(*img, img_entering, img_leaving)) {
            rc.failure = "image of " + join_word(w) + " cuts a block: " + join_word(*img);
            return false;
        }
        if (!images[w.size()].insert(join_word(*img)).second) {
            rc.failure = "two words map to " + join_word(*img);
            return false;
        }
        ++from_count[w.size()];
        ++rc.words;
        return true;
    });
    if (!ok) return rc;
    enumerate_admissible(to, max_len, [&](const Word& w) {
        if (!cuts(w, img_entering, img_leaving)) ++to_count[w.size()];
        return true;
    });
    for (int n = 1; n <= max_len; ++n) {
        if (from_count[n] != to_count[n]) {
            rc.failure = "length " + std::to_string(n) + ": " + std::to_string(from_count[n]) + " words map into " +
                         std::to_string(to_count[n]);
            return rc;
        }
    }
    rc.bijective = true;
    return rc;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Conjugate: return "conjugate";
        case Verdict::NotConjugate: return "not conjugate";
        case Verdict::OutOfScope: return "out of scope";
    }
    return "";
}

namespace {

std::vector<Symbol> sorted_list(const SymbolSet& s) { return {s.begin(), s.end()}; }

void add_iso(SlidingBlockRecipe& r, const Relation& a, const Relation& b, const std::string& what) {
    auto iso = are_isomorphic(a, b);
    if (!iso) throw IntegrityError(what + " relations are not isomorphic");
    r.one_block.insert(iso->minus_map.begin(), iso->minus_map.end());
    r.one_block.insert(iso->plus_map.begin(), iso->plus_map.end());
}

// Bijection between the pair sets x1 x x2 and y1 x y2, in lexicographic order.
void add_pairs(SlidingBlockRecipe& r, const SymbolSet& x1, const SymbolSet& x2, const SymbolSet& y1,
               const SymbolSet& y2, const std::string& what) {
    if (x1.size() * x2.size() != y1.size() * y2.size())
        throw IntegrityError(what + ": pair counts differ");
    std::vector<Pair> src, dst;
    for (const auto& a : x1)
        for (const auto& b : x2) src.push_back({a, b});
    for (const auto& a : y1)
        for (const auto& b : y2) dst.push_back({a, b});
    for (size_t i = 0; i < src.size(); ++i) r.two_block[src[i]] = dst[i];
    r.steps.push_back(what + ": " + std::to_string(src.size()) + " pairs");
}

SlidingBlockRecipe recipe_pqr(const FamilyInstance& a, const FamilyInstance& b) {
    SlidingBlockRecipe r;
    add_iso(r, family_block(a, "p", "p"), family_block(b, "p", "p"), "R(p,p)");
    add_iso(r, family_block(a, "r", "p"), family_block(b, "r", "p"), "R(r,p)");
    r.steps.push_back("relabel loops at p and the edges between r and p by relation isomorphisms");
    auto M = [](const FamilyInstance& f, const char* x, const char* y) { return family_minus(f, x, y); };
    auto P = [](const FamilyInstance& f, const char* x, const char* y) { return family_plus(f, x, y); };
    for (const auto& s : M(a, "p", "q")) r.entering.insert(s);
    for (const auto& s : P(a, "q", "r")) r.entering.insert(s);
    for (const auto& s : M(a, "q", "r")) r.leaving.insert(s);
    for (const auto& s : P(a, "p", "q")) r.leaving.insert(s);
    add_pairs(r, M(a, "p", "q"), P(a, "p", "q"), M(b, "p", "q"), P(b, "p", "q"), "visits p->q->p");
    add_pairs(r, M(a, "p", "q"), M(a, "q", "r"), M(b, "p", "q"), M(b, "q", "r"), "visits p->q->r (minus)");
    add_pairs(r, P(a, "q", "r"), M(a, "q", "r"), P(b, "q", "r"), M(b, "q", "r"), "visits r->q->r");
    add_pairs(r, P(a, "q", "r"), P(a, "p", "q"), P(b, "q", "r"), P(b, "p", "q"), "visits r->q->p (plus)");
    return r;
}

struct Piece {
    Relation rel;
    int owner;  // 0 or 1: index of the q vertex
    std::string enc;
};

std::vector<Piece> q01_pieces(const FamilyInstance& f) {
    std::vector<Piece> out;
    for (int i = 0; i < 2; ++i)
        for (auto& d : decompose(family_block(f, "q" + std::to_string(i), "p")))
            out.push_back({d, i, canonical_encoding(d)});
    return out;
}

// q0 keeps the first piece in canonical order, q1 takes the rest.
RGraph q01_normal_form(const FamilyInstance& f) {
    auto pieces = q01_pieces(f);
    std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.enc < y.enc; });
    FamilyComponents comps = family_components(f);
    BlockSpec s0, s1;
    for (size_t k = 0; k < pieces.size(); ++k) {
        BlockSpec& s = k == 0 ? s0 : s1;
        const Relation& rel = pieces[k].rel;
        auto ml = sorted_list(rel.minus()), pl = sorted_list(rel.plus());
        for (const auto& [m, p] : rel.pairs()) {
            int i = static_cast<int>(std::find(ml.begin(), ml.end(), m) - ml.begin());
            int j = static_cast<int>(std::find(pl.begin(), pl.end(), p) - pl.begin());
            s.pairs.insert({s.minus + i, s.plus + j});
        }
        s.minus += static_cast<int>(ml.size());
        s.plus += static_cast<int>(pl.size());
    }
    comps[{"q0", "p"}] = s0;
    comps[{"q1", "p"}] = s1;
    return family_graph(FamilyKind::G0_pq01, comps);
}

SlidingBlockRecipe recipe_pq01(const FamilyInstance& a, const FamilyInstance& b, int& crossing) {
    auto src = q01_pieces(a), dst = q01_pieces(b);
    // Target owner index under orientation sigma (1 swaps q0 and q1 on the target side).
    std::vector<int> best_match;
    int best_sigma = 0;
    crossing = -1;
    for (int sigma = 0; sigma < 2; ++sigma) {
        std::vector<int> match(src.size(), -1);
        std::vector<bool> used(dst.size(), false);
        int cross = 0;
        for (int pass = 0; pass < 2; ++pass) {
            for (size_t i = 0; i < src.size(); ++i) {
                if (match[i] >= 0) continue;
                for (size_t j = 0; j < dst.size(); ++j) {
                    if (used[j] || dst[j].enc != src[i].enc) continue;
                    bool same = (dst[j].owner ^ sigma) == src[i].owner;
                    if (pass == 0 && !same) continue;
                    match[i] = static_cast<int>(j);
                    used[j] = true;
                    cross += same ? 0 : 1;
                    break;
                }
            }
        }
        if (std::count(match.begin(), match.end(), -1) != 0)
            throw IntegrityError("irreducible pieces of R(q0,p) + R(q1,p) do not match");
        if (crossing < 0 || cross < crossing) {
            crossing = cross;
            best_match = match;
            best_sigma = sigma;
        }
    }

    SlidingBlockRecipe r;
    add_iso(r, family_block(a, "p", "p"), family_block(b, "p", "p"), "R(p,p)");
    std::map<Symbol, Symbol> phi;
    std::map<Symbol, int> target_owner;
    for (size_t i = 0; i < src.size(); ++i) {
        const Piece& t = dst[best_match[i]];
        auto iso = are_isomorphic(src[i].rel, t.rel);
        if (!iso) throw IntegrityError("matched pieces are not isomorphic");
        for (const auto& [x, y] : iso->minus_map) phi[x] = y, target_owner[x] = t.owner;
        for (const auto& [x, y] : iso->plus_map) phi[x] = y, target_owner[x] = t.owner;
    }
    auto qa = [](int i) { return "q" + std::to_string(i); };
    // psi[side][i][j]: E(p,q_i) of a onto E(p,q_j) of b, by sorted position.
    auto psi = [&](bool minus, int i, int j, const Symbol& s) {
        auto from = sorted_list(minus ? family_minus(a, "p", qa(i)) : family_plus(a, "p", qa(i)));
        auto to = sorted_list(minus ? family_minus(b, "p", qa(j)) : family_plus(b, "p", qa(j)));
        if (from.size() != to.size()) throw IntegrityError("E(p,q) cardinalities differ");
        return to[std::find(from.begin(), from.end(), s) - from.begin()];
    };
    for (int i = 0; i < 2; ++i) {
        const auto am = family_minus(a, "p", qa(i)), ap = family_plus(a, "p", qa(i));
        const auto em = family_minus(a, qa(i), "p"), fp = family_plus(a, qa(i), "p");
        r.entering.insert(am.begin(), am.end());
        r.entering.insert(fp.begin(), fp.end());
        r.leaving.insert(em.begin(), em.end());
        r.leaving.insert(ap.begin(), ap.end());
        const int same = i ^ best_sigma;
        for (const auto& x : am)
            for (const auto& e : em) r.two_block[{x, e}] = {psi(true, i, target_owner[e], x), phi[e]};
        for (const auto& f : fp)
            for (const auto& y : ap) r.two_block[{f, y}] = {phi[f], psi(false, i, target_owner[f], y)};
        for (const auto& x : am)
            for (const auto& y : ap) r.two_block[{x, y}] = {psi(true, i, same, x), psi(false, i, same, y)};
        for (const auto& f : fp)
            for (const auto& e : em) r.two_block[{f, e}] = {phi[f], phi[e]};
    }
    r.steps.push_back("relabel loops at p by a relation isomorphism");
    r.steps.push_back("match irreducible pieces of R(q0,p) + R(q1,p); " + std::to_string(crossing) +
                      " piece(s) change vertex" + (best_sigma ? " (q0 and q1 swapped)" : ""));
    r.steps.push_back("rewrite each q-visit: the edge into q follows the vertex of the piece it meets");
    r.intermediates = {q01_normal_form(a), q01_normal_form(b)};
    return r;
}

}  // namespace

ConjugacyResult conjugacy_test(const FamilyInstance& a, const FamilyInstance& b) {
    if (a.kind != b.kind)
        throw InputError("conjugacy test needs two instances of one kind, got " + kind_name(a.kind) + " and " +
                         kind_name(b.kind));
    ConjugacyResult res;
    if (a.kind != FamilyKind::G0_pqr && a.kind != FamilyKind::G0_pq01) {
        res.detail = "no conjugacy criterion for " + kind_name(a.kind);
        return res;
    }
    auto iso_key = [&](const char* x, const char* y, const std::string& key) {
        if (canonical_encoding(family_block(a, x, y)) != canonical_encoding(family_block(b, x, y)))
            res.separating.push_back(key);
    };
    auto num_key = [&](long x, long y, const std::string& key) {
        if (x != y) res.separating.push_back(key + " (" + std::to_string(x) + " vs " + std::to_string(y) + ")");
    };
    auto card = [](const SymbolSet& s) { return static_cast<long>(s.size()); };

    if (a.kind == FamilyKind::G0_pqr) {
        iso_key("p", "p", "R(p,p) isomorphism class");
        iso_key("r", "p", "R(r,p) isomorphism class");
        auto prod = [&](const FamilyInstance& f, bool m1, const char* x1, const char* y1, bool m2, const char* x2,
                        const char* y2) {
            return card(m1 ? family_minus(f, x1, y1) : family_plus(f, x1, y1)) *
                   card(m2 ? family_minus(f, x2, y2) : family_plus(f, x2, y2));
        };
        num_key(prod(a, true, "p", "q", true, "q", "r"), prod(b, true, "p", "q", true, "q", "r"),
                "card E-(p,q)*card E-(q,r)");
        num_key(prod(a, false, "q", "r", false, "p", "q"), prod(b, false, "q", "r", false, "p", "q"),
                "card E+(q,r)*card E+(p,q)");
        num_key(prod(a, true, "p", "q", false, "p", "q"), prod(b, true, "p", "q", false, "p", "q"),
                "card E-(p,q)*card E+(p,q)");
        if (!res.separating.empty()) {
            res.verdict = Verdict::NotConjugate;
            res.detail = "separated by " + res.separating.front();
            return res;
        }
        res.verdict = Verdict::Conjugate;
        res.recipe = recipe_pqr(a, b);
        res.detail = "all criterion invariants agree";
        return res;
    }

    iso_key("p", "p", "R(p,p) isomorphism class");
    auto mu_sum = [](const FamilyInstance& f) {
        return mu_add(mu_vector(family_block(f, "q0", "p")), mu_vector(family_block(f, "q1", "p")));
    };
    if (mu_sum(a) != mu_sum(b)) res.separating.push_back("mu(R(q0,p)) + mu(R(q1,p))");
    num_key(card(family_minus(a, "p", "q0")), card(family_minus(b, "p", "q0")), "card E-(p,q0)");
    num_key(card(family_plus(a, "p", "q0")), card(family_plus(b, "p", "q0")), "card E+(p,q0)");
    if (!res.separating.empty()) {
        res.verdict = Verdict::NotConjugate;
        res.detail = "separated by " + res.separating.front();
        return res;
    }
    int crossing = 0;
    res.verdict = Verdict::Conjugate;
    res.recipe = recipe_pq01(a, b, crossing);
    res.detail = crossing == 0 ? "all criterion invariants agree; pieces keep their vertex"
                               : "all criterion invariants agree; " + std::to_string(crossing) +
                                     " piece(s) change vertex, so visits pairing edges of moved and unmoved "
                                     "pieces have no admissible image";
    return res;
}

// Three-vertex Markov-Dyck graphs.

std::string variant_name(Md3Variant v) {
    switch (v) {
        case Md3Variant::Alpha: return "alpha";
        case Md3Variant::Beta: return "beta";
        case Md3Variant::TGraph: return "T";
    }
    return "";
}

Md3Variant parse_variant(const std::string& s) {
    if (s == "alpha") return Md3Variant::Alpha;
    if (s == "beta") return Md3Variant::Beta;
    if (s == "T" || s == "tgraph") return Md3Variant::TGraph;
    throw InputError("unknown variant '" + s + "' (expected alpha, beta or T)");
}

namespace {

long Taa(const Md3Instance& i) { return i.T[0][0]; }
long Tab(const Md3Instance& i) { return i.T[0][1]; }
long Tba(const Md3Instance& i) { return i.T[1][0]; }
long Tbb(const Md3Instance& i) { return i.T[1][1]; }

void md3_require(bool ok, const std::string& what) {
    if (!ok) throw InputError("violated: " + what);
}

}  // namespace

Md3Instance md3_make(Md3Variant variant, const Matrix& T, long delta_super, long delta_sub) {
    md3_require(T.size() == 2 && T[0].size() == 2 && T[1].size() == 2, "T is a 2x2 matrix");
    for (const auto& row : T)
        for (long x : row) md3_require(x >= 0, "T has nonnegative entries");
    const long aa = T[0][0], ab = T[0][1], ba = T[1][0], bb = T[1][1];
    md3_require(aa > bb || (aa == bb && ab >= ba), "T normalized: T_aa > T_bb, or T_aa = T_bb and T_ab >= T_ba");
    md3_require(aa + ba > 1, "T_aa + T_ba > 1");
    md3_require(ab + bb > 1, "T_ab + T_bb > 1");
    md3_require(ab > 0 && ba > 0, "T strongly connected (T_ab > 0 and T_ba > 0)");
    Md3Instance inst;
    inst.variant = variant;
    inst.T = T;
    inst.delta_super = delta_super;
    inst.delta_sub = delta_sub;
    const long ds = delta_super, d = delta_sub;
    switch (variant) {
        case Md3Variant::Alpha:
            md3_require(0 <= ds && ds <= aa, "0 <= delta_super <= T_aa");
            md3_require(0 <= d && d <= ab, "0 <= delta_sub <= T_ab");
            md3_require(ds + ab - d > 0, "delta_super + T_ab - delta_sub > 0");
            inst.adjacency = {{aa - ds, 1, d}, {ds, 0, ab - d}, {ba, 0, bb}};
            inst.names = {"a0", "a1", "b"};
            inst.alpha_vertex = "a0";
            inst.beta_vertex = "b";
            break;
        case Md3Variant::Beta:
            md3_require(0 <= ds && ds <= bb, "0 <= delta_super <= T_bb");
            md3_require(0 <= d && d <= ba, "0 <= delta_sub <= T_ba");
            md3_require(ds + ba - d > 0, "delta_super + T_ba - delta_sub > 0");
            inst.adjacency = {{bb - ds, 1, d}, {ds, 0, ba - d}, {ab, 0, aa}};
            inst.names = {"b0", "b1", "a"};
            inst.alpha_vertex = "a";
            inst.beta_vertex = "b0";
            break;
        case Md3Variant::TGraph:
            md3_require(ds == 0 && d == 0, "the T graph takes no deltas");
            inst.adjacency = T;
            inst.names = {"a", "b"};
            inst.alpha_vertex = "a";
            inst.beta_vertex = "b";
            break;
    }
    std::vector<Symbol> edge_names;
    for (size_t i = 0; i < inst.adjacency.size(); ++i)
        for (size_t j = 0; j < inst.adjacency.size(); ++j)
            for (long c = 0; c < inst.adjacency[i][j]; ++c)
                edge_names.push_back(inst.names[i] + "_" + inst.names[j] + "." + std::to_string(c));
    inst.md_graph = build_markov_dyck(inst.adjacency, inst.names, edge_names);
    return inst;
}

std::vector<std::string> md3_keys() {
    return {"I-1", "I-2", "I0-2", "I-1(alpha)", "I-1(beta)", "I-3(alpha)", "I-3(beta)", "I-5(alpha)", "I-5(beta)"};
}

long md3_formula(const Md3Instance& inst, const std::string& key) {
    const auto keys = md3_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw InputError("unknown invariant key '" + key + "'");
    const long aa = Taa(inst), ab = Tab(inst), ba = Tba(inst), bb = Tbb(inst);
    const long ds = inst.delta_super, d = inst.delta_sub;
    if (key == "I0-2") return aa + ab + ba + bb + (inst.variant == Md3Variant::TGraph ? 0 : 1);
    if (inst.variant == Md3Variant::TGraph) throw ScopeError("no formula for " + key + " on the T graph");
    const bool alpha = inst.variant == Md3Variant::Alpha;
    if (key == "I-1") return aa + bb - ds;
    if (key == "I-2") return aa * (aa - 1) + bb * (bb - 1) + ds + (alpha ? d * ba : ab * d);
    if (key == "I-1(alpha)") return alpha ? aa - ds : aa;
    if (key == "I-1(beta)") return alpha ? bb : bb - ds;
    if (ds != 0) throw ScopeError(key + " is stated only for delta_super = 0");
    if (alpha) {
        if (key == "I-3(alpha)") return aa * (aa + 1 + d);
        if (key == "I-3(beta)") return bb * (bb + ba);
        if (key == "I-5(alpha)") {
            const long s = aa + 1 + d;
            return aa * (s * s + aa * s + ab - d + d * (bb + ba));
        }
        const long s = bb + ba;
        return bb * (s * s + bb * s + ba * (aa + d));
    }
    if (key == "I-3(alpha)") return aa * (aa + ab);
    if (key == "I-3(beta)") return bb * (bb + 1 + d);
    if (key == "I-5(alpha)") {
        const long s = aa + ab;
        return aa * (s * s + aa * s + ab * (bb + d));
    }
    const long s = bb + 1 + d;
    return bb * (s * s + bb * s + ba - d + d * (aa + ab));
}

InvariantReport md3_predict(const Md3Instance& inst) {
    InvariantReport rep{"md3 " + variant_name(inst.variant), {}};
    for (const auto& key : md3_keys()) {
        try {
            rep.entries.push_back({key, "equality", std::to_string(md3_formula(inst, key)), "", "", std::nullopt});
        } catch (const ScopeError&) {
        }
    }
    return rep;
}

namespace {

int key_length(const std::string& key) {
    if (key == "I0-2" || key == "I-2") return 2;
    return key[2] - '0';
}

// Negative orbits of length k whose multiplier maps to a single loop edge at v of the tilde graph.
long refined_count(const OrbitCensus& c, const QuotientData& q, int k, const Vertex& v) {
    long n = 0;
    for (const auto& o : c.orbits) {
        if (o.length != k || o.cls != OrbitClass::Negative) continue;
        Element img = psi(q, o.multiplier);
        if (img.zero || !img.plus_path.empty() || img.minus_path.size() != 1) continue;
        const Edge& e = q.tilde_graph.minus_edge(img.minus_path.front());
        if (e.source == v && e.target == v) ++n;
    }
    return n;
}

std::map<std::string, long> md3_values(const Md3Instance& inst, const OrbitCensus& c, const QuotientData& q) {
    std::map<std::string, long> out;
    auto get = [](const std::map<int, long>& m, int k) {
        auto it = m.find(k);
        return it == m.end() ? 0L : it->second;
    };
    for (const auto& key : md3_keys()) {
        if (key_length(key) > c.max_len) continue;
        if (key == "I-1") out[key] = get(c.I_minus, 1);
        else if (key == "I-2") out[key] = get(c.I_minus, 2);
        else if (key == "I0-2") out[key] = get(c.I_zero, 2);
        else {
            const bool alpha = key.find("alpha") != std::string::npos;
            out[key] = refined_count(c, q, key_length(key), alpha ? inst.alpha_vertex : inst.beta_vertex);
        }
    }
    return out;
}

}  // namespace

InvariantReport md3_check(const Md3Instance& inst, const OrbitCensus& census, const QuotientData& q) {
    const bool deep = inst.variant != Md3Variant::TGraph && inst.delta_super == 0;
    const int need = deep ? 5 : 2;
    if (census.max_len < need)
        throw InputError("census depth " + std::to_string(census.max_len) + " is below the " + std::to_string(need) +
                         " needed");
    InvariantReport rep = md3_predict(inst);
    const auto measured = md3_values(inst, census, q);
    for (auto& e : rep.entries) {
        auto it = measured.find(e.key);
        if (it == measured.end()) continue;
        e.measured = std::to_string(it->second);
        e.match = e.measured == e.predicted;
    }
    return rep;
}

std::map<std::string, long> md3_measure(const Md3Instance& inst, int depth) {
    QuotientData q = build_quotient(inst.md_graph);
    OrbitCensus c = census(identity_presentation(inst.md_graph), depth, 0, &q);
    return md3_values(inst, c, q);
}

Md3Distinction md3_distinguish(const Md3Instance& a, const Md3Instance& b) {
    if (a.T != b.T) throw InputError("distinguishing needs instances over the same T");
    Md3Distinction res;
    auto delta_of = [](const Md3Instance& i, Md3Variant v) { return i.variant == v ? i.delta_sub : -1; };
    long da = std::max(delta_of(a, Md3Variant::Alpha), delta_of(b, Md3Variant::Alpha));
    long db = std::max(delta_of(a, Md3Variant::Beta), delta_of(b, Md3Variant::Beta));
    if (da >= 0 && db >= 0) res.delta_relation = da * a.T[1][0] == a.T[0][1] * db;

    if (a.variant == b.variant && a.delta_super == b.delta_super && a.delta_sub == b.delta_sub) {
        res.verdict = "conjugate";
        res.reason = "identical instances";
        return res;
    }
    if (rgraph_isomorphic(a.md_graph, b.md_graph)) {
        res.verdict = "conjugate";
        res.invariant = "graph isomorphism";
        res.reason = "the R-graphs are isomorphic";
        return res;
    }
    const auto ma = md3_measure(a), mb = md3_measure(b);
    std::vector<std::string> order{"I0-2", "I-1", "I-2"};
    const bool symmetric = a.T[0][0] == a.T[1][1] && a.T[0][1] == a.T[1][0];
    if (!symmetric)
        for (const auto& k : {"I-1(alpha)", "I-1(beta)", "I-3(alpha)", "I-3(beta)", "I-5(alpha)", "I-5(beta)"})
            order.push_back(k);
    for (const auto& k : order) {
        if (ma.at(k) != mb.at(k)) {
            res.verdict = "not conjugate";
            res.invariant = k;
            res.reason = k + ": " + std::to_string(ma.at(k)) + " vs " + std::to_string(mb.at(k));
            return res;
        }
    }
    res.verdict = "undecided";
    res.reason = symmetric ? "equal I0-2, I-1, I-2; refined counts are not invariant for symmetric T"
                           : "all measured invariants agree";
    return res;
}

}  // namespace rgs
