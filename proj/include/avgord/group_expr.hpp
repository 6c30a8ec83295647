#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "avgord/order_distribution.hpp"
#include "avgord/rational.hpp"

namespace avgord {

/// Finite abelian group in elementary-divisor form: a multiset of prime
/// powers p^e, each >= 2. Empty multiset is the trivial group.
struct AbelianDescriptor {
    // (p, e) pairs, kept sorted; repeats allowed.
    std::vector<std::pair<BigInt, unsigned>> factors;

    void add(const BigInt& p, unsigned e);
    void normalize();
    BigInt order() const;
    bool trivial() const { return factors.empty(); }
    std::set<BigInt> primes() const;

    bool operator==(const AbelianDescriptor& o) const = default;
};

/// Symbolic group descriptor. Every node resolves to an OrderDistribution;
/// large coprime products are evaluated multiplicatively without ever
/// materializing the product distribution.
struct GroupExpr {
    enum class Kind { Abelian, Named, Product, Perm };

    Kind kind = Kind::Abelian;
    AbelianDescriptor abelian;        // Kind::Abelian
    std::string name;                 // Kind::Named — registry key
    std::vector<GroupExpr> children;  // Kind::Product
    std::string perm_path;            // Kind::Perm — generator file

    static GroupExpr trivial();
    static GroupExpr from_abelian(AbelianDescriptor d);
    static GroupExpr named(std::string key);
    static GroupExpr product(std::vector<GroupExpr> parts);
    static GroupExpr perm(std::string path);
};

/// Grammar: `C(n)` cyclic of prime-power order n, `^k` direct power,
/// `x` direct product, bare registry keys, `perm:<path>`.
/// Example: "C(2)^3 x C(9) x D4". Empty string is the trivial group.
GroupExpr parse_group_expr(const std::string& text);
std::string group_expr_str(const GroupExpr& expr);

/// Number of elements of each order in a finite abelian group: per prime p
/// with local exponents e_1..e_k, #(order divides p^j) = p^{sum_i min(e_i, j)};
/// exact-order counts are consecutive differences; distinct primes combine by
/// coprime product.
OrderDistribution abelian_order_distribution(const AbelianDescriptor& desc);

/// Closed form (p^{2k+1} + 1)/(p + 1) for psi of the cyclic group of order
/// p^k; agrees with abelian_order_distribution by construction (tested).
BigInt cyclic_psi_closed(const BigInt& p, unsigned k);

/// Full order distribution of an expression. Materializes the histogram, so
/// only valid for groups whose distribution fits in memory.
OrderDistribution resolve_distribution(const GroupExpr& expr);

BigInt group_order(const GroupExpr& expr);
std::set<BigInt> prime_support(const GroupExpr& expr);
bool pairwise_coprime(const std::vector<GroupExpr>& parts);

/// Exact average order psi/|G|. Products with pairwise-coprime factor orders
/// are evaluated as the product of factor values; otherwise the distribution
/// is built via lcm_convolve.
BigRat avg_order(const GroupExpr& expr);
BigInt psi(const GroupExpr& expr);

/// avg_order(g) / avg_order(h), exact.
BigRat o_ratio(const GroupExpr& g, const GroupExpr& h);

// ---- Named-group registry -------------------------------------------------

class Permutation;  // perm.hpp

/// Registry entry: stored distribution, permutation realization, nilpotency
/// attestation, and the order of the distinguished cyclic subgroup used as a
/// base-pair witness (0 if none).
struct NamedGroup {
    std::string key;
    OrderDistribution dist;
    bool nilpotent = false;
    BigInt cyclic_witness_order;  // attested cyclic subgroup (rotations for dihedral)
};

/// Resolves D4, Q8, C4 and the family DihTwo(k) (dihedral of order 2^{k+1},
/// k >= 2; DihTwo(2) == D4). Returns nullopt for unknown keys.
std::optional<NamedGroup> find_named(const std::string& key);

/// Permutation generators realizing a registry group (natural dihedral action;
/// regular representation for Q8). Used for oracle cross-checks.
std::vector<Permutation> named_generators(const std::string& key);

/// True iff `h` is attested (structurally, from the registry plus abelian
/// embedding theory) to embed into `g` as a subgroup.
bool subgroup_witness(const GroupExpr& g, const GroupExpr& h);

}  // namespace avgord
