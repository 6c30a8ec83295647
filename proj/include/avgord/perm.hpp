#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avgord/order_distribution.hpp"

namespace avgord {

/// Bijection on points 1..n, stored as a 0-based image array.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<std::uint32_t> images);

    static Permutation identity(std::uint32_t degree);

    /// Disjoint-cycle notation, 1-based: "(1 2 3 4)(5 6)". Degree is the
    /// largest moved point unless min_degree is larger.
    static Permutation parse_cycles(const std::string& text, std::uint32_t min_degree = 0);

    std::uint32_t degree() const { return static_cast<std::uint32_t>(img_.size()); }
    std::uint32_t apply(std::uint32_t i) const { return img_[i]; }
    Permutation padded(std::uint32_t degree) const;

    /// Composition: (a * b)(x) = a(b(x)).
    Permutation operator*(const Permutation& o) const;
    Permutation inverse() const;
    bool is_identity() const;

    /// lcm of cycle lengths.
    BigInt order() const;

    std::string cycle_str() const;

    bool operator==(const Permutation& o) const { return img_ == o.img_; }
    bool operator<(const Permutation& o) const { return img_ < o.img_; }

    const std::vector<std::uint32_t>& images() const { return img_; }

private:
    std::vector<std::uint32_t> img_;
};

struct PermGroup {
    std::vector<Permutation> generators;  // padded to a common degree
    std::uint32_t degree = 0;

    explicit PermGroup(std::vector<Permutation> gens);
};

/// Generator file: one permutation per line in disjoint-cycle notation,
/// '#' starts a comment. Degree inferred from the largest moved point.
PermGroup load_perm_group(const std::string& path);
PermGroup parse_perm_group(const std::string& text);

inline constexpr std::size_t kEnumerationCap = 1'000'000;
inline constexpr std::size_t kLatticeOrderCap = 64;

/// Breadth-first closure of the generators under composition; the exact
/// element set, sorted by image array. ResourceError beyond the cap,
/// reporting the partial count.
std::vector<Permutation> enumerate(const PermGroup& g, std::size_t cap = kEnumerationCap);

/// Histogram of element orders over the full enumeration.
OrderDistribution order_distribution_bruteforce(const PermGroup& g, std::size_t cap = kEnumerationCap);

/// Elements commuting with every generator.
std::vector<Permutation> center(const PermGroup& g, std::size_t cap = kEnumerationCap);

/// All subgroups, obtained by closing the cyclic subgroups under pairwise
/// join until fixpoint. Requires |G| <= order_cap.
std::vector<std::vector<Permutation>> subgroup_lattice(const PermGroup& g,
                                                       std::size_t order_cap = kLatticeOrderCap);

/// True iff for every prime p dividing |G| the set of p-power-order elements
/// is closed under the group operation (G is the product of its Sylow
/// subgroups).
bool nilpotency_check(const PermGroup& g, std::size_t cap = kEnumerationCap);

}  // namespace avgord
