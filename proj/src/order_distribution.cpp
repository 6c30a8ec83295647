#include "avgord/order_distribution.hpp"

namespace avgord {

OrderDistribution trivial_distribution() {
    OrderDistribution d;
    d.entries[BigInt(1)] = 1;
    d.total = 1;
    return d;
}

BigInt psi(const OrderDistribution& dist) {
    BigInt s = 0;
    for (const auto& [d, c] : dist.entries) s += d * c;
    return s;
}

BigRat avg_order(const OrderDistribution& dist) { return BigRat(psi(dist), dist.total); }

OrderDistribution lcm_convolve(const OrderDistribution& a, const OrderDistribution& b) {
    OrderDistribution out;
    out.total = a.total * b.total;
    BigInt l;
    for (const auto& [d1, c1] : a.entries)
        for (const auto& [d2, c2] : b.entries) {
            mpz_lcm(l.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
            out.entries[l] += c1 * c2;
        }
    return out;
}

bool distribution_valid(const OrderDistribution& dist) {
    auto it = dist.entries.find(BigInt(1));
    if (it == dist.entries.end() || it->second != 1) return false;
    BigInt sum = 0;
    for (const auto& [d, c] : dist.entries) {
        if (d < 1 || c < 1) return false;
        if (!mpz_divisible_p(dist.total.get_mpz_t(), d.get_mpz_t())) return false;
        sum += c;
    }
    return sum == dist.total;
}

}  // namespace avgord
