#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "avgord/primes.hpp"

using namespace avgord;

namespace {

// independent oracle: trial division
bool is_prime_slow(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

// Runs first: the sieve state is a process-wide singleton and only an unsieved
// range can trip the cap.
TEST_CASE("sieve cap raises a resource error") {
    set_prime_cap(10);
    CHECK_THROWS_AS(nth_prime(10), ResourceError);
    set_prime_cap(100'000'000);
    CHECK(nth_prime(10) == 29);
}

TEST_CASE("first primes match trial division") {
    std::vector<std::uint64_t> slow;
    for (std::uint64_t v = 2; slow.size() < 1000; ++v)
        if (is_prime_slow(v)) slow.push_back(v);
    for (std::size_t n = 1; n <= slow.size(); ++n) CHECK(nth_prime(n) == slow[n - 1]);
}

TEST_CASE("pinned values") {
    CHECK(nth_prime(1) == 2);
    CHECK(nth_prime(4) == 7);
    CHECK(nth_prime(25) == 97);
    CHECK(nth_prime(10000) == 104729);
    CHECK_THROWS_AS(nth_prime(0), ParseError);
}

TEST_CASE("stream yields the same sequence with skipping index") {
    PrimeStream ps;
    for (std::size_t n = 1; n <= 200; ++n) {
        std::uint64_t p = ps.next();
        CHECK(ps.index() == n);
        CHECK(p == nth_prime(n));
    }
    ps.reset();
    CHECK(ps.next() == 2);
}
