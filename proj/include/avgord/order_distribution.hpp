#pragma once

#include <map>

#include "avgord/rational.hpp"

namespace avgord {

/// Histogram of element orders: order d -> number of elements of order d.
/// The universal carrier from which psi and the average order are computed.
struct OrderDistribution {
    std::map<BigInt, BigInt> entries;
    BigInt total = 1;  // group order

    bool operator==(const OrderDistribution& o) const = default;
};

/// Distribution of the trivial group: {1:1}, total 1.
OrderDistribution trivial_distribution();

/// Sum of element orders: sum over d of d * count(d).
BigInt psi(const OrderDistribution& dist);

/// psi / total, exact.
BigRat avg_order(const OrderDistribution& dist);

/// Order distribution of a direct product: counts combine over pairs by lcm
/// of orders; totals multiply. Exact for arbitrary (not necessarily coprime)
/// factors.
OrderDistribution lcm_convolve(const OrderDistribution& a, const OrderDistribution& b);

/// Structural sanity: count(1) == 1, counts sum to total, every order
/// divides the total. Used by tests and the verifier.
bool distribution_valid(const OrderDistribution& dist);

}  // namespace avgord
