#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "avgord/group_expr.hpp"
#include "avgord/perm.hpp"

using namespace avgord;

namespace {

const std::string kData = std::string(TEST_DATA_DIR);

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

TEST_CASE("cycle parsing and basic algebra") {
    Permutation p = Permutation::parse_cycles("(1 2 3 4)(5 6)");
    CHECK(p.degree() == 6);
    CHECK(p.order() == 4);
    CHECK(p.cycle_str() == "(1 2 3 4)(5 6)");
    CHECK((p * p.inverse()).is_identity());
    Permutation q = Permutation::parse_cycles("(1 2)");
    // (a*b)(x) = a(b(x))
    Permutation pq = p * q.padded(p.degree());
    CHECK(pq.apply(0) == 2);  // 1 -> 2 -> 3
    CHECK(Permutation::parse_cycles("()").is_identity());
    CHECK_THROWS_AS(Permutation::parse_cycles("(1 1)"), ParseError);
    CHECK_THROWS_AS(Permutation::parse_cycles("(1 2"), ParseError);
}

TEST_CASE("enumeration, distribution, center for small groups") {
    PermGroup s3 = load_perm_group(kData + "/s3.perm");
    CHECK(enumerate(s3).size() == 6);
    CHECK(order_distribution_bruteforce(s3) == make_dist({{1, 1}, {2, 3}, {3, 2}}));
    CHECK(center(s3).size() == 1);

    PermGroup d4 = load_perm_group(kData + "/d4.perm");
    CHECK(order_distribution_bruteforce(d4) == make_dist({{1, 1}, {2, 5}, {4, 2}}));
    CHECK(center(d4).size() == 2);

    PermGroup a4 = load_perm_group(kData + "/a4.perm");
    CHECK(order_distribution_bruteforce(a4) == make_dist({{1, 1}, {2, 3}, {3, 8}}));

    PermGroup c12 = load_perm_group(kData + "/c12.perm");
    CHECK(order_distribution_bruteforce(c12).total == 12);
}

TEST_CASE("registry generators realize the registry distributions") {
    for (const char* key : {"C4", "D4", "Q8", "DihTwo(3)", "DihTwo(5)"}) {
        auto named = find_named(key);
        REQUIRE(named.has_value());
        PermGroup g{named_generators(key)};
        CHECK(order_distribution_bruteforce(g) == named->dist);
    }
}

TEST_CASE("subgroup lattice sizes") {
    CHECK(subgroup_lattice(PermGroup{named_generators("D4")}).size() == 10);
    CHECK(subgroup_lattice(PermGroup{named_generators("Q8")}).size() == 6);
    CHECK(subgroup_lattice(load_perm_group(kData + "/s3.perm")).size() == 6);
    CHECK(subgroup_lattice(load_perm_group(kData + "/c12.perm")).size() == 6);
}

TEST_CASE("nilpotency check") {
    CHECK(nilpotency_check(PermGroup{named_generators("D4")}));
    CHECK(nilpotency_check(PermGroup{named_generators("Q8")}));
    CHECK(nilpotency_check(load_perm_group(kData + "/c12.perm")));
    CHECK(!nilpotency_check(load_perm_group(kData + "/s3.perm")));
    CHECK(!nilpotency_check(load_perm_group(kData + "/d6.perm")));
    CHECK(!nilpotency_check(load_perm_group(kData + "/a4.perm")));
}

TEST_CASE("average order dominates the center's average order") {
    for (const char* f : {"s3.perm", "a4.perm", "d4.perm", "c12.perm", "d6.perm", "dih8.perm"}) {
        PermGroup g = load_perm_group(kData + "/" + f);
        auto all = enumerate(g);
        OrderDistribution dg = order_distribution_bruteforce(g);
        OrderDistribution dz;
        dz.total = 0;
        for (const Permutation& z : center(g)) {
            dz.entries[z.order()] += 1;
            dz.total += 1;
        }
        CHECK(avg_order(dg) >= avg_order(dz));
    }
}

TEST_CASE("enumeration cap raises a resource error with the partial count") {
    PermGroup a4 = load_perm_group(kData + "/a4.perm");
    CHECK_THROWS_AS(enumerate(a4, 5), ResourceError);
}
