#pragma once

#include <cstdint>
#include <cstddef>

#include "avgord/errors.hpp"

namespace avgord {

/// Hard cap on prime values the sieve will produce. Exceeding it is a
/// ResourceError, never silent truncation. Default 10^8.
std::uint64_t prime_cap();
void set_prime_cap(std::uint64_t cap);

/// p_n, 1-based (nth_prime(1) == 2). Backed by a shared, lazily extended
/// segmented sieve; thread-safe and consistent across calls.
std::uint64_t nth_prime(std::size_t n);

/// Number of primes currently guaranteed available under the cap, extending
/// the sieve as needed. Throws ResourceError if fewer than `n` primes exist
/// below the cap.
void ensure_primes(std::size_t n);

/// Stateful iterator over p_1, p_2, ...; deterministic and restartable.
/// Single-owner: concurrent use of one stream needs external coordination.
class PrimeStream {
public:
    PrimeStream() = default;

    std::uint64_t next() { return nth_prime(++index_); }
    std::size_t index() const { return index_; }
    void reset() { index_ = 0; }

private:
    std::size_t index_ = 0;
};

}  // namespace avgord
