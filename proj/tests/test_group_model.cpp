#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "avgord/group_expr.hpp"
#include "avgord/order_distribution.hpp"

using namespace avgord;

namespace {

OrderDistribution dist_of(const std::string& expr) {
    return resolve_distribution(parse_group_expr(expr));
}

OrderDistribution make_dist(std::map<long, long> entries) {
    OrderDistribution d;
    d.total = 0;
    for (auto [k, v] : entries) {
        d.entries[BigInt(k)] = BigInt(v);
        d.total += v;
    }
    return d;
}

}  // namespace

TEST_CASE("parser grammar") {
    CHECK(group_order(parse_group_expr("")) == 1);
    CHECK(group_order(parse_group_expr("C(8)")) == 8);
    CHECK(group_order(parse_group_expr("C(2)^3 x C(9) x D4")) == 8 * 9 * 8);
    CHECK(group_expr_str(parse_group_expr("C(2) x C(2) x C(9)")) == "C(2)^2 x C(9)");
    CHECK_THROWS_AS(parse_group_expr("C(1)"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("C(6)"), ParseError);  // 6 is not a prime power
    CHECK_THROWS_AS(parse_group_expr("C(0)"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("C(4)^0"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("Zork"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("C(4) y C(9)"), ParseError);
}

TEST_CASE("expression string round-trips through the parser") {
    for (const char* s : {"", "C(4)", "C(2)^3 x C(9)", "D4", "Q8 x C(9)", "DihTwo(4)"}) {
        GroupExpr e = parse_group_expr(s);
        CHECK(resolve_distribution(parse_group_expr(group_expr_str(e))) == resolve_distribution(e));
    }
}

TEST_CASE("pinned distributions and psi values") {
    CHECK(psi(dist_of("C(2) x C(3)")) == 21);   // cyclic of order 6
    CHECK(psi(dist_of("C(8)")) == 43);
    CHECK(cyclic_psi_closed(BigInt(3), 2) == 61);
    CHECK(dist_of("C(9) x C(3)") == make_dist({{1, 1}, {3, 8}, {9, 18}}));
    CHECK(dist_of("D4") == make_dist({{1, 1}, {2, 5}, {4, 2}}));
    CHECK(psi(dist_of("D4")) == 19);
    CHECK(dist_of("Q8") == make_dist({{1, 1}, {2, 1}, {4, 6}}));
    CHECK(avg_order(parse_group_expr("C(2)^2")) == BigRat(7, 4));
    CHECK(avg_order(parse_group_expr("D4")) == BigRat(19, 8));
}

TEST_CASE("cyclic closed form agrees with the distribution route") {
    for (long p : {2, 3, 5, 7, 11, 13})
        for (unsigned k = 1; k <= 6; ++k) {
            AbelianDescriptor d;
            d.add(BigInt(p), k);
            CHECK(cyclic_psi_closed(BigInt(p), k) == psi(abelian_order_distribution(d)));
        }
}

TEST_CASE("lcm_convolve matches direct computation on a non-coprime product") {
    // C2 x C2: orders {1:1, 2:3}; o = 7/4, not o(C2)^2 = 9/4
    OrderDistribution c2 = dist_of("C(2)");
    OrderDistribution sq = lcm_convolve(c2, c2);
    CHECK(sq == make_dist({{1, 1}, {2, 3}}));
    CHECK(avg_order(sq) == BigRat(7, 4));
    CHECK(avg_order(c2) * avg_order(c2) == BigRat(9, 4));
    CHECK(distribution_valid(sq));
}

TEST_CASE("average order is multiplicative over coprime factors") {
    GroupExpr a = parse_group_expr("C(8) x C(2)");
    GroupExpr b = parse_group_expr("C(9) x C(3)");
    GroupExpr c = parse_group_expr("C(25)");
    GroupExpr prod = GroupExpr::product({a, b, c});
    CHECK(pairwise_coprime(prod.children));
    CHECK(avg_order(prod) == avg_order(a) * avg_order(b) * avg_order(c));
    CHECK(psi(prod) == psi(resolve_distribution(prod)));
}

TEST_CASE("o_ratio pinned examples") {
    CHECK(o_ratio(parse_group_expr("D4"), parse_group_expr("C(4)")) == BigRat(19, 22));
    CHECK(o_ratio(parse_group_expr("C(2)^2"), parse_group_expr("C(2)")) == BigRat(7, 6));
}

TEST_CASE("registry entries") {
    auto d4 = find_named("D4");
    REQUIRE(d4.has_value());
    CHECK(d4->nilpotent);
    CHECK(d4->cyclic_witness_order == 4);
    auto dih = find_named("DihTwo(4)");
    REQUIRE(dih.has_value());
    CHECK(dih->dist.total == 32);
    CHECK(dih->cyclic_witness_order == 16);
    CHECK(avg_order(dih->dist) / avg_order(parse_group_expr("C(16)")) == BigRat(203, 342));
    CHECK(!find_named("Zork").has_value());
}

TEST_CASE("subgroup witness: abelian domination and named bases") {
    auto w = [](const char* g, const char* h) {
        return subgroup_witness(parse_group_expr(g), parse_group_expr(h));
    };
    CHECK(w("C(4)", "C(2)"));
    CHECK(w("C(4)", ""));
    CHECK(!w("C(4)", "C(2)^2"));    // C2 x C2 does not embed in C4
    CHECK(w("C(2)^2", "C(2)"));
    CHECK(!w("C(2)", "C(4)"));
    CHECK(w("C(8) x C(2) x C(9)", "C(4) x C(2) x C(3)"));
    CHECK(!w("C(8) x C(9)", "C(2)^2"));
    CHECK(w("D4", "C(4)"));
    CHECK(!w("D4", "C(8)"));
    CHECK(w("D4 x C(9)", "C(4) x C(3)"));
    CHECK(w("DihTwo(4)", "C(16)"));
    CHECK(w("Q8", "C(4)"));
}
