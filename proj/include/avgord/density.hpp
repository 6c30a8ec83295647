#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "avgord/certificate.hpp"
#include "avgord/group_expr.hpp"
#include "avgord/rational.hpp"

namespace avgord {

/// One term of the construction sequence: the exact ratio
/// r_n = o(C_{p_n}^m) / o(C_{p_n}) > 1, with r_n -> 1.
struct RatioTerm {
    std::size_t index;  // prime index n
    std::uint64_t prime;
    BigRat ratio;
};

/// Yields r_n for n = 1, 2, ... skipping a finite excluded index set J.
/// Ratios are computed from order distributions; the closed fraction
/// (p^{m+1} - p + 1)/(p^{m+1} - p^m + p^{m-1}) is kept as a cross-check.
class RatioTermSequence {
public:
    RatioTermSequence(int m, std::set<std::size_t> excluded = {});

    RatioTerm next();
    int m() const { return m_; }
    const std::set<std::size_t>& excluded() const { return excluded_; }

    /// Distribution route: o(C_p^m) / o(C_p), built from element-order counts.
    static BigRat term_from_distributions(const BigInt& p, int m);
    /// Closed-fraction route; equals term_from_distributions for all p, m.
    static BigRat term_closed_form(const BigInt& p, int m);

private:
    int m_;
    std::set<std::size_t> excluded_;
    std::size_t next_index_ = 1;
};

struct GreedyResult {
    std::vector<std::size_t> indices;  // included prime indices, increasing
    std::vector<BigRat> terms;         // matching exact ratios
    BigRat achieved;                   // exact product over the indices
    std::size_t scanned = 0;
};

inline constexpr std::size_t kDefaultMaxTerms = 1'000'000;

/// Greedy finite-subproduct scan: include n iff P * r_n <= target; stop when
/// target <= P * (1 + eps). All decisions are exact; a directed-rounding
/// interval filter resolves the easy comparisons and falls back to exact
/// rational arithmetic whenever the interval straddles.
/// Throws BudgetError if max_terms candidates are scanned before the
/// tolerance is met.
GreedyResult greedy_subproduct(const BigRat& target, RatioTermSequence seq, const BigRat& eps,
                               std::size_t max_terms = kDefaultMaxTerms);

/// A nilpotent pair (g0, h0 <= g0) with rho0 = o(g0)/o(h0) < 1; plays the
/// sub-unit anchor role in the nilpotent composer.
struct BasePair {
    std::string key;  // registry key, or "custom" for user-supplied pairs
    GroupExpr g0;
    GroupExpr h0;
    BigRat rho0;
    std::set<BigInt> primes;  // primes dividing |g0|
};

/// Built-in pairs: "D4C4" (ratio 19/22) and "DihTwo(k)" for k >= 2, the pair
/// (dihedral of order 2^{k+1}, cyclic of order 2^k), ratios decreasing
/// toward 1/2.
BasePair builtin_base_pair(const std::string& key);

/// Largest built-in rho0 <= a (smallest correction), if any. Built-ins only
/// cover a in (1/2, 1); below that see kmz_bound_plan.
std::optional<BasePair> pick_base_pair(const BigRat& a);

/// User-supplied pair from generator files; oracle-validated: h0's elements
/// are a subset of g0's, g0 passes the nilpotency check, and rho0 < 1.
BasePair base_pair_from_perm_files(const std::string& g_path, const std::string& h_path);

/// Plan for approaching targets below the built-in base pairs: the smallest
/// n >= 4 whose bound p_n^3 / p_n^{p_n} is <= a, with the symbolic recipe.
struct KmzPlan {
    std::size_t n = 0;
    std::uint64_t p = 0;
    std::uint64_t s = 0;  // exponent index, s = p + 1
    BigRat bound;         // p^3 / p^p, exact
    std::string narrative;
};

KmzPlan kmz_bound_plan(const BigRat& a);

/// Raised when a sub-unit construction's base pair has rho0 > a; carries the
/// suggested plan for reaching such targets.
struct BaseInsufficientError : std::runtime_error {
    KmzPlan plan;
    BaseInsufficientError(const std::string& msg, KmzPlan p)
        : std::runtime_error(msg), plan(std::move(p)) {}
};

/// Target a >= 1: certificate with G = x_{n in I} C_{p_n}^m and
/// H = x_{n in I} C_{p_n}, exact ratio within relative eps below a.
Certificate construct_ge1(const BigRat& a, const BigRat& eps, int m = 2,
                          std::set<std::size_t> J = {},
                          std::size_t max_terms = kDefaultMaxTerms);

/// Target a in (0, 1]: inverse mode; abelian G with subgroup H and reported
/// ratio o(H)/o(G) in [a, a*(1+eps)].
Certificate construct_le1_abelian(const BigRat& a, const BigRat& eps, int m = 2,
                                  std::size_t max_terms = kDefaultMaxTerms);

/// Target a in (0, 1): G = g0 x abelian tail over primes coprime to the
/// base, H = h0 x matching subgroups; exact ratio rho0 * prod(r_n).
/// G is nilpotent, and nonabelian when g0 is.
Certificate construct_sub_unit_nilpotent(const BigRat& a, const BigRat& eps, const BasePair& base,
                                         int m = 2, std::size_t max_terms = kDefaultMaxTerms);

struct SeqDiagRow {
    std::size_t n;
    std::uint64_t prime;
    BigRat ratio;      // exact r_n
    double x;          // ln r_n, diagnostic float
    double px;         // p_n * x_n
    double partial_sum;  // sum of x over rows so far
};

/// Float diagnostics for the term sequence: x_n -> 0, p_n * x_n -> 1, and the
/// divergent partial sums. Never used in certification.
std::vector<SeqDiagRow> seq_diagnostics(int m, std::size_t N);

}  // namespace avgord
