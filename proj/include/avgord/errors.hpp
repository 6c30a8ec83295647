#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace avgord {

// Malformed input: group descriptors, rationals, certificate documents.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured cap was hit: prime sieve bound, enumeration cap, lattice cap.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conversion to floating point left the representable range.
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The greedy scan ran out of terms before meeting the tolerance.
// `achieved_approx` is a floating approximation of the partial product;
// the exact value is reconstructible from the included indices but is
// deliberately not materialized here (it can run to megabytes).
struct BudgetError : std::runtime_error {
    double achieved_approx;
    std::size_t included;
    std::size_t scanned;

    BudgetError(const std::string& msg, double achieved, std::size_t inc, std::size_t sc)
        : std::runtime_error(msg), achieved_approx(achieved), included(inc), scanned(sc) {}
};

}  // namespace avgord
