#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "rgs/error.hpp"
#include "support.hpp"

using namespace rgs;
using namespace test;

TEST_CASE("omega") {
    Relation r = example1_rel();
    CHECK(omega(r, Side::Minus, "a-") == SymbolSet{"a+", "b+"});
    CHECK(omega(r, Side::Minus, "b-") == SymbolSet{"a+"});
    CHECK(omega(r, Side::Plus, "b+") == SymbolSet{"a-"});
    CHECK(omega(rel({"x"}, {}, {}), Side::Minus, "x").empty());
    CHECK_THROWS_AS(omega(Relation(), Side::Minus, "x"), InputError);
}

TEST_CASE("full rows and columns") {
    CHECK(full_rows_cols(example1_rel()) == std::make_pair(SymbolSet{"a-"}, SymbolSet{"a+"}));
    CHECK(full_rows_cols(identity2()) == std::make_pair(SymbolSet{}, SymbolSet{}));
    CHECK(full_rows_cols(full2()) == std::make_pair(SymbolSet{"a-", "b-"}, SymbolSet{"a+", "b+"}));
}

TEST_CASE("class invariants") {
    CHECK(class_invariants(full2()).D_minus == 2);
    auto id = class_invariants(identity2());
    CHECK(id.D_minus == 1);
    CHECK(id.D_plus == 1);
    auto ex = class_invariants(example1_rel());
    CHECK(ex.classes_minus == std::vector<SymbolSet>{{"a-"}, {"b-"}});
    CHECK(ex.D_minus == 1);
    // classes of sizes 2 and 4 on the minus side
    Relation r = rel({"a", "b", "c", "d", "e", "f"}, {"x", "y"},
                     {{"a", "x"}, {"b", "x"}, {"c", "y"}, {"d", "y"}, {"e", "y"}, {"f", "y"}});
    CHECK(class_invariants(r).D_minus == 2);
    CHECK_THROWS_AS(class_invariants(Relation()), PreconditionError);
}

TEST_CASE("rho flags") {
    auto id = rho_flags(identity2());
    CHECK(id.triangle);
    CHECK(id.circle);
    CHECK(id.nabla);
    CHECK(id.circle_nabla);
    CHECK_FALSE(rho_flags(example1_rel()).circle);
    auto f = rho_flags(full2());
    CHECK(f.triangle);
    CHECK_FALSE(f.circle);
    // minus classes of sizes 2 and 3
    Relation r = rel({"a", "b", "c", "d", "e"}, {"x", "y"},
                     {{"a", "x"}, {"b", "x"}, {"c", "y"}, {"d", "y"}, {"e", "y"}});
    CHECK(rho_flags(r).triangle);
    // sizes 2 and 4: pairwise gcd equals the overall gcd 2, so triangle without nabla
    Relation s = rel({"a", "b", "c", "d", "e", "f"}, {"x", "y"},
                     {{"a", "x"}, {"b", "x"}, {"c", "y"}, {"d", "y"}, {"e", "y"}, {"f", "y"}});
    CHECK(rho_flags(s).triangle);
    CHECK_FALSE(rho_flags(s).nabla);
    // sizes 2, 3 and 4: gcd(2,4) = 2 differs from the overall gcd 1
    std::vector<Pair> pairs;
    for (int i = 0; i < 9; ++i) pairs.push_back({"m" + std::to_string(i), i < 2 ? "x" : i < 5 ? "y" : "z"});
    Relation t = rel({"m0", "m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8"}, {"x", "y", "z"}, pairs);
    CHECK_FALSE(rho_flags(t).triangle);
}

TEST_CASE("decompose") {
    auto parts = decompose(identity2());
    REQUIRE(parts.size() == 2);
    for (const auto& p : parts) {
        CHECK(p.minus().size() == 1);
        CHECK(p.plus().size() == 1);
        CHECK(p.pairs().size() == 1);
    }
    CHECK(decompose(example1_rel()).size() == 1);
    CHECK(decompose(Relation()).empty());
    // isolated symbols become their own pieces
    Relation lone = rel({"a-", "b-"}, {"a+"}, {{"a-", "a+"}});
    CHECK(decompose(lone).size() == 2);
    CHECK(kronecker_sum(decompose(lone)) == lone);
}

TEST_CASE("kronecker sum rejects overlapping sides") {
    CHECK_THROWS_AS(kronecker_sum({identity2(), identity2()}), InputError);
}

TEST_CASE("complement") {
    Relation id2 = identity2();
    Relation sub = rel({"a-"}, {"a+"}, {{"a-", "a+"}});
    CHECK(complement(id2, sub) == rel({"b-"}, {"b+"}, {{"b-", "b+"}}));
    Relation c = complement(id2, id2);
    CHECK(c.empty_sides());
    CHECK(c.pairs().empty());
    Relation id3 = Relation::identity({"a-", "b-", "c-"}, {"a+", "b+", "c+"});
    CHECK(complement(id3, sub) == Relation::identity({"b-", "c-"}, {"b+", "c+"}));
    // not a union of closed pieces
    CHECK_THROWS_AS(complement(example1_rel(), rel({"a-"}, {"a+"}, {{"a-", "a+"}})), InputError);
}

TEST_CASE("kronecker product") {
    Relation p = kronecker_product(identity2(), identity2());
    CHECK(p.minus().size() == 4);
    CHECK(p.plus().size() == 4);
    CHECK(p.pairs().size() == 4);
    CHECK(kronecker_product(identity2(), Relation()).pairs().empty());
    CHECK(kronecker_product(example1_rel(), identity2()).pairs().size() == 3 * 2);
}

TEST_CASE("power relation") {
    Relation id2 = identity2();
    Relation p2 = power_relation(id2, 2);
    CHECK(p2.minus().size() == 4);
    CHECK(p2.plus().size() == 4);
    // oracle: vectors (x0,x1) and (y0,y1) related iff a cyclic shift pairs every coordinate
    std::vector<Symbol> m{"a-", "b-"}, pl{"a+", "b+"};
    long count = 0;
    for (auto& x0 : m)
        for (auto& x1 : m)
            for (auto& y0 : pl)
                for (auto& y1 : pl) {
                    bool k0 = id2.related(x0, y0) && id2.related(x1, y1);
                    bool k1 = id2.related(x0, y1) && id2.related(x1, y0);
                    bool expect = k0 || k1;
                    count += expect;
                    CHECK(p2.related(vector_symbol({x0, x1}), vector_symbol({y0, y1})) == expect);
                }
    CHECK(count == 6);
    CHECK(p2.pairs().size() == 6);
    CHECK(power_relation(Relation(), 3).pairs().empty());
    Relation one = Relation::full({"a-"}, {"a+"});
    Relation p3 = power_relation(one, 3);
    CHECK(p3.pairs().size() == 1);
}

TEST_CASE("isomorphism") {
    std::mt19937_64 rng(11);
    Relation ex = example1_rel();
    CHECK(are_isomorphic(ex, shuffle_labels(ex, rng)).has_value());
    CHECK_FALSE(are_isomorphic(identity2(), ex).has_value());
    Relation other = rel({"a-", "b-"}, {"a+", "b+"}, {{"a-", "a+"}, {"a-", "b+"}, {"b-", "b+"}});
    auto iso = are_isomorphic(ex, other);
    REQUIRE(iso.has_value());
    CHECK(iso->minus_map.at("a-") == "a-");
    CHECK(iso->minus_map.at("b-") == "b-");
    CHECK(iso->plus_map.at("a+") == "b+");
    CHECK(iso->plus_map.at("b+") == "a+");
    // the witness is an isomorphism
    for (const auto& m : ex.minus())
        for (const auto& p : ex.plus())
            CHECK(ex.related(m, p) == other.related(iso->minus_map.at(m), iso->plus_map.at(p)));
}

TEST_CASE("canonical encoding is side respecting") {
    Relation r = rel({"a"}, {"x", "y"}, {{"a", "x"}, {"a", "y"}});
    Relation t = rel({"a", "b"}, {"x"}, {{"a", "x"}, {"b", "x"}});
    CHECK(canonical_encoding(r) != canonical_encoding(t));
    CHECK_FALSE(are_isomorphic(r, t).has_value());
}

TEST_CASE("canonical encoding agrees with brute-force isomorphism") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        Relation a = random_relation(rng, 3), b = random_relation(rng, 3);
        bool brute = brute_isomorphic(a, b);
        CHECK(are_isomorphic(a, b).has_value() == brute);
        CHECK((canonical_encoding(a) == canonical_encoding(b)) == brute);
    }
}

TEST_CASE("multiplicity vectors") {
    auto mu = mu_vector(identity2());
    REQUIRE(mu.size() == 1);
    CHECK(mu.begin()->second == 2);
    CHECK(mu_vector(Relation()).empty());
    Relation ex = relabel(example1_rel(), [](const Symbol& s) { return "e" + s; });
    auto mu2 = mu_vector(kronecker_sum({identity2(), ex}));
    REQUIRE(mu2.size() == 2);
    std::multiset<long> mult;
    for (const auto& [k, v] : mu2) mult.insert(v);
    CHECK(mult == std::multiset<long>{1, 2});
    CHECK(mu_add(mu_vector(identity2()), mu_vector(ex)) == mu2);
}
