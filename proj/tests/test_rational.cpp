#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "avgord/rational.hpp"

using namespace avgord;

TEST_CASE("construction canonicalizes") {
    CHECK(BigRat(4, 6) == BigRat(2, 3));
    CHECK(BigRat(-4, -6) == BigRat(2, 3));
    CHECK(BigRat(4, -6) == BigRat(-2, 3));
    CHECK(BigRat(0, 7) == BigRat(0));
    CHECK(BigRat(2, 3).num() == 2);
    CHECK(BigRat(2, 3).den() == 3);
    CHECK_THROWS_AS(BigRat(1, 0), ParseError);
}

TEST_CASE("str is always num/den") {
    CHECK(BigRat(19, 22).str() == "19/22");
    CHECK(BigRat(10).str() == "10/1");
    CHECK(BigRat(0).str() == "0/1");
    CHECK(BigRat(-3, 9).str() == "-1/3");
}

TEST_CASE("parse accepts fractions, integers and decimal literals") {
    CHECK(BigRat::parse("19/22") == BigRat(19, 22));
    CHECK(BigRat::parse("10") == BigRat(10));
    CHECK(BigRat::parse("-7/2") == BigRat(-7, 2));
    CHECK(BigRat::parse("0.37") == BigRat(37, 100));
    CHECK(BigRat::parse("1e-4") == BigRat(1, 10000));
    CHECK(BigRat::parse("2.5e3") == BigRat(2500));
    CHECK(BigRat::parse("1e6") == BigRat(1000000));
    CHECK(BigRat::parse(".5") == BigRat(1, 2));
    CHECK_THROWS_AS(BigRat::parse(""), ParseError);
    CHECK_THROWS_AS(BigRat::parse("abc"), ParseError);
    CHECK_THROWS_AS(BigRat::parse("1/0"), ParseError);
    CHECK_THROWS_AS(BigRat::parse("1.2.3"), ParseError);
}

TEST_CASE("parse round-trips str") {
    for (long n = -20; n <= 20; ++n)
        for (long d = 1; d <= 20; ++d) {
            BigRat q(n, d);
            CHECK(BigRat::parse(q.str()) == q);
        }
}

TEST_CASE("arithmetic and comparisons are exact") {
    BigRat a(1, 3), b(1, 6);
    CHECK(a + b == BigRat(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == BigRat(1, 18));
    CHECK(a / b == BigRat(2));
    CHECK(a > b);
    CHECK(b < a);
    CHECK(a.reciprocal() == BigRat(3));
    CHECK((-a).abs() == a);
    CHECK_THROWS_AS(a / BigRat(0), ParseError);
    CHECK_THROWS_AS(BigRat(0).reciprocal(), ParseError);
}

TEST_CASE("balanced product equals the naive fold") {
    std::vector<BigRat> terms;
    BigRat naive(1);
    for (long i = 1; i <= 200; ++i) {
        BigRat t(i * i + 1, i * i + i + 1);
        terms.push_back(t);
        naive = naive * t;
    }
    CHECK(product(terms) == naive);
    CHECK(product({}) == BigRat(1));
    CHECK(product({BigRat(7, 6)}) == BigRat(7, 6));
}

TEST_CASE("to_double is a diagnostic with overflow guard") {
    CHECK(to_double(BigRat(1, 2)) == doctest::Approx(0.5));
    BigInt huge;
    mpz_ui_pow_ui(huge.get_mpz_t(), 10, 400);
    CHECK_THROWS_AS(to_double(BigRat(huge)), OverflowError);
    // huge/huge' stays finite even when both parts overflow a double
    CHECK(to_double(BigRat(huge, huge * 2)) == doctest::Approx(0.5));
}
