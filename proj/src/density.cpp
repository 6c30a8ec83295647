#include "avgord/density.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "avgord/errors.hpp"
#include "avgord/perm.hpp"
#include "avgord/primes.hpp"

namespace avgord {

RatioTermSequence::RatioTermSequence(int m, std::set<std::size_t> excluded)
    : m_(m), excluded_(std::move(excluded)) {
    if (m_ < 2) throw ParseError("ratio term sequence requires m >= 2");
}

BigRat RatioTermSequence::term_from_distributions(const BigInt& p, int m) {
    AbelianDescriptor num, den;
    for (int i = 0; i < m; ++i) num.factors.emplace_back(p, 1);
    den.factors.emplace_back(p, 1);
    return avg_order(abelian_order_distribution(num)) / avg_order(abelian_order_distribution(den));
}

BigRat RatioTermSequence::term_closed_form(const BigInt& p, int m) {
    auto pw = [&](unsigned e) {
        BigInt r;
        mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
        return r;
    };
    const unsigned mu = static_cast<unsigned>(m);
    return BigRat(pw(mu + 1) - p + 1, pw(mu + 1) - pw(mu) + pw(mu - 1));
}

RatioTerm RatioTermSequence::next() {
    while (excluded_.count(next_index_)) ++next_index_;
    std::size_t n = next_index_++;
    std::uint64_t p = nth_prime(n);
    return RatioTerm{n, p, term_from_distributions(BigInt(static_cast<unsigned long>(p)), m_)};
}

// ---- Greedy -----------------------------------------------------------------

namespace {

constexpr mpfr_prec_t kFilterPrec = 192;

// Directed-rounding enclosure of a positive rational.
struct Enclosure {
    mpfr_t lo, hi;
    Enclosure() {
        mpfr_init2(lo, kFilterPrec);
        mpfr_init2(hi, kFilterPrec);
        mpfr_set_ui(lo, 1, MPFR_RNDD);
        mpfr_set_ui(hi, 1, MPFR_RNDU);
    }
    ~Enclosure() {
        mpfr_clear(lo);
        mpfr_clear(hi);
    }
    Enclosure(const Enclosure&) = delete;
    Enclosure& operator=(const Enclosure&) = delete;

    void set(const BigRat& q) {
        mpfr_set_q(lo, q.raw().get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi, q.raw().get_mpq_t(), MPFR_RNDU);
    }
    void mul(const Enclosure& o) {
        mpfr_mul(lo, lo, o.lo, MPFR_RNDD);
        mpfr_mul(hi, hi, o.hi, MPFR_RNDU);
    }
};

}  // namespace

GreedyResult greedy_subproduct(const BigRat& target, RatioTermSequence seq, const BigRat& eps,
                               std::size_t max_terms) {
    if (target < BigRat(1)) throw ParseError("greedy target must be >= 1");
    if (eps <= BigRat(0)) throw ParseError("eps must be > 0");

    const BigRat stop_at = target / (BigRat(1) + eps);  // stop once P >= stop_at

    Enclosure P;               // encloses the exact running product
    Enclosure tgt, stp, term;
    tgt.set(target);
    stp.set(stop_at);

    GreedyResult res;
    BigRat exact_prefix(1);
    std::size_t exact_upto = 0;  // exact_prefix covers terms[0..exact_upto)

    auto exact_product = [&]() -> const BigRat& {
        if (exact_upto < res.terms.size()) {
            std::vector<BigRat> pending(res.terms.begin() + static_cast<long>(exact_upto),
                                        res.terms.end());
            exact_prefix = exact_prefix * product(pending);
            exact_upto = res.terms.size();
            P.set(exact_prefix);  // re-tighten the enclosure
        }
        return exact_prefix;
    };

    auto should_stop = [&]() {
        if (mpfr_cmp(P.lo, stp.hi) >= 0) return true;
        if (mpfr_cmp(P.hi, stp.lo) < 0) return false;
        return exact_product() >= stop_at;
    };

    mpfr_t prod_hi, prod_lo;
    mpfr_init2(prod_hi, kFilterPrec);
    mpfr_init2(prod_lo, kFilterPrec);

    auto admissible = [&](const BigRat& r) {
        mpfr_mul(prod_hi, P.hi, term.hi, MPFR_RNDU);
        if (mpfr_cmp(prod_hi, tgt.lo) <= 0) return true;
        mpfr_mul(prod_lo, P.lo, term.lo, MPFR_RNDD);
        if (mpfr_cmp(prod_lo, tgt.hi) > 0) return false;
        return exact_product() * r <= target;
    };

    while (true) {
        if (should_stop()) break;
        if (res.scanned >= max_terms) {
            double approx = mpfr_get_d(P.hi, MPFR_RNDN);
            mpfr_clear(prod_hi);
            mpfr_clear(prod_lo);
            throw BudgetError("greedy budget of " + std::to_string(max_terms) +
                                  " terms exhausted; achieved ~" + std::to_string(approx) +
                                  " with " + std::to_string(res.indices.size()) + " included terms",
                              approx, res.indices.size(), res.scanned);
        }
        RatioTerm t = seq.next();
        ++res.scanned;
        term.set(t.ratio);
        if (admissible(t.ratio)) {
            res.indices.push_back(t.index);
            res.terms.push_back(t.ratio);
            P.mul(term);
        }
    }
    mpfr_clear(prod_hi);
    mpfr_clear(prod_lo);

    res.achieved = exact_product();
    // exact postcondition: P <= target <= P * (1 + eps)
    if (res.achieved > target || target > res.achieved * (BigRat(1) + eps))
        throw std::logic_error("greedy postcondition violated");
    return res;
}

// ---- Constructors -----------------------------------------------------------

namespace {

GroupExpr tail_group(const std::vector<std::size_t>& indices, int m) {
    std::vector<GroupExpr> parts;
    parts.reserve(indices.size());
    for (std::size_t n : indices) {
        BigInt p(static_cast<unsigned long>(nth_prime(n)));
        AbelianDescriptor d;
        for (int i = 0; i < m; ++i) d.factors.emplace_back(p, 1);
        parts.push_back(GroupExpr::from_abelian(std::move(d)));
    }
    return GroupExpr::product(std::move(parts));
}

GroupExpr tail_subgroup(const std::vector<std::size_t>& indices) {
    std::vector<GroupExpr> parts;
    parts.reserve(indices.size());
    for (std::size_t n : indices) {
        AbelianDescriptor d;
        d.factors.emplace_back(BigInt(static_cast<unsigned long>(nth_prime(n))), 1);
        parts.push_back(GroupExpr::from_abelian(std::move(d)));
    }
    return GroupExpr::product(std::move(parts));
}

std::size_t prime_index(const BigInt& p) {
    PrimeStream ps;
    while (true) {
        BigInt q(static_cast<unsigned long>(ps.next()));
        if (q == p) return ps.index();
        if (q > p) throw ParseError("not a prime: " + p.get_str());
    }
}

}  // namespace

Certificate construct_ge1(const BigRat& a, const BigRat& eps, int m, std::set<std::size_t> J,
                          std::size_t max_terms) {
    if (a < BigRat(1)) throw ParseError("construct_ge1 requires target >= 1");
    GreedyResult r = greedy_subproduct(a, RatioTermSequence(m, J), eps, max_terms);

    Certificate cert;
    cert.mode = Mode::ge1;
    cert.target = a;
    cert.eps = eps;
    cert.g = tail_group(r.indices, m);
    cert.h = tail_subgroup(r.indices);
    cert.claimed_ratio = r.achieved;
    cert.trace.m = m;
    cert.trace.J.assign(J.begin(), J.end());
    cert.trace.I = r.indices;
    return cert;
}

Certificate construct_le1_abelian(const BigRat& a, const BigRat& eps, int m,
                                  std::size_t max_terms) {
    if (a <= BigRat(0) || a > BigRat(1))
        throw ParseError("construct_le1_abelian requires target in (0, 1]; 0 is approached, not attained");
    GreedyResult r = greedy_subproduct(a.reciprocal(), RatioTermSequence(m, {}), eps, max_terms);

    Certificate cert;
    cert.mode = Mode::le1_abelian;
    cert.target = a;
    cert.eps = eps;
    cert.g = tail_group(r.indices, m);
    cert.h = tail_subgroup(r.indices);
    cert.claimed_ratio = r.achieved.reciprocal();
    cert.trace.m = m;
    cert.trace.I = r.indices;
    return cert;
}

Certificate construct_sub_unit_nilpotent(const BigRat& a, const BigRat& eps, const BasePair& base,
                                         int m, std::size_t max_terms) {
    if (a <= BigRat(0) || a >= BigRat(1))
        throw ParseError("construct_sub_unit_nilpotent requires target in (0, 1)");
    if (base.rho0 > a)
        throw BaseInsufficientError("base pair " + base.key + " has ratio " + base.rho0.str() +
                                        " > target " + a.str(),
                                    kmz_bound_plan(a));

    std::set<std::size_t> J;
    for (const BigInt& p : base.primes) J.insert(prime_index(p));

    GreedyResult r = greedy_subproduct(a / base.rho0, RatioTermSequence(m, J), eps, max_terms);

    Certificate cert;
    cert.mode = Mode::sub_unit_nilpotent;
    cert.target = a;
    cert.eps = eps;
    if (r.indices.empty()) {
        cert.g = base.g0;
        cert.h = base.h0;
    } else {
        std::vector<GroupExpr> gp{base.g0}, hp{base.h0};
        for (std::size_t n : r.indices) {
            gp.push_back(tail_group({n}, m));
            hp.push_back(tail_subgroup({n}));
        }
        cert.g = GroupExpr::product(std::move(gp));
        cert.h = GroupExpr::product(std::move(hp));
    }
    cert.claimed_ratio = base.rho0 * r.achieved;
    cert.trace.m = m;
    cert.trace.J.assign(J.begin(), J.end());
    cert.trace.I = r.indices;
    cert.trace.base_pair = base.key;
    return cert;
}

// ---- Base pairs -------------------------------------------------------------

BasePair builtin_base_pair(const std::string& key) {
    std::string dih_key;
    unsigned k = 0;
    if (key == "D4C4") {
        dih_key = "D4";
        k = 2;
    } else if (key.rfind("DihTwo(", 0) == 0) {
        dih_key = key;
        auto named = find_named(key);
        if (!named) throw ParseError("unknown base pair: " + key);
        k = static_cast<unsigned>(mpz_sizeinbase(named->cyclic_witness_order.get_mpz_t(), 2)) - 1;
    } else {
        throw ParseError("unknown base pair: " + key);
    }

    BasePair bp;
    bp.key = key;
    bp.g0 = GroupExpr::named(dih_key);
    AbelianDescriptor h;
    h.factors.emplace_back(BigInt(2), k);
    bp.h0 = GroupExpr::from_abelian(std::move(h));
    bp.rho0 = o_ratio(bp.g0, bp.h0);
    bp.primes = {BigInt(2)};
    return bp;
}

std::optional<BasePair> pick_base_pair(const BigRat& a) {
    // rho0 decreases toward 1/2 as k grows; pick the largest rho0 <= a
    BasePair d4 = builtin_base_pair("D4C4");
    if (d4.rho0 <= a) return d4;
    for (unsigned k = 3; k <= 24; ++k) {
        BasePair bp = builtin_base_pair("DihTwo(" + std::to_string(k) + ")");
        if (bp.rho0 <= a) return bp;
    }
    return std::nullopt;
}

BasePair base_pair_from_perm_files(const std::string& g_path, const std::string& h_path) {
    PermGroup g = load_perm_group(g_path);
    PermGroup h = load_perm_group(h_path);
    auto gelems = enumerate(g);
    auto helems = enumerate(h);
    std::set<Permutation> gset(gelems.begin(), gelems.end());
    for (const auto& e : helems)
        if (!gset.count(e.padded(g.degree)))
            throw ParseError("base pair rejected: subgroup elements not contained in the group");
    if (!nilpotency_check(g))
        throw ParseError("base pair rejected: group fails the nilpotency check");

    BasePair bp;
    bp.key = "custom";
    bp.g0 = GroupExpr::perm(g_path);
    bp.h0 = GroupExpr::perm(h_path);
    OrderDistribution gd, hd;
    gd.total = BigInt(static_cast<unsigned long>(gelems.size()));
    for (const auto& e : gelems) gd.entries[e.order()] += 1;
    hd.total = BigInt(static_cast<unsigned long>(helems.size()));
    for (const auto& e : helems) hd.entries[e.order()] += 1;
    bp.rho0 = avg_order(gd) / avg_order(hd);
    if (bp.rho0 >= BigRat(1))
        throw ParseError("base pair rejected: ratio " + bp.rho0.str() + " is not below 1");
    BigInt rest = gd.total, p = 2;
    while (rest > 1) {
        while (!mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t()))
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        bp.primes.insert(p);
        while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) rest /= p;
    }
    return bp;
}

// ---- KMZ bound plan ---------------------------------------------------------

KmzPlan kmz_bound_plan(const BigRat& a) {
    if (a < BigRat(0) || a >= BigRat(1))
        throw ParseError("bound plan requires target in [0, 1)");
    std::size_t n = 4;
    KmzPlan plan;
    while (true) {
        std::uint64_t p = nth_prime(n);
        BigInt bp(static_cast<unsigned long>(p));
        BigInt p3, pp;
        mpz_pow_ui(p3.get_mpz_t(), bp.get_mpz_t(), 3);
        mpz_pow_ui(pp.get_mpz_t(), bp.get_mpz_t(), static_cast<unsigned long>(p));
        BigRat bound(p3, pp);
        if (bound <= a || a.is_zero()) {
            plan.n = n;
            plan.p = p;
            plan.s = p + 1;
            plan.bound = bound;
            std::ostringstream nar;
            nar << "Take p = " << p << " (prime #" << n << ") and s = p + 1 = " << plan.s
                << ". Let U be the homocyclic group C_{p^s}^r of exponent p^s and let G be the "
                   "extension of U by a special p-group acting on it, for which o(G) < p^3 while "
                   "o(U) >= p^p. Then o(G)/o(U) < p^3/p^p = " << plan.bound.str();
            if (a.is_zero())
                nar << ", and the bound tends to 0 along growing p, approaching the target 0.";
            else
                nar << " <= " << a.str()
                    << ". Correct the residual factor a*o(U)/o(G) (a value >= 1) with the abelian "
                       "constructor over primes other than " << p << ".";
            plan.narrative = nar.str();
            return plan;
        }
        ++n;
    }
}

// ---- Diagnostics ------------------------------------------------------------

std::vector<SeqDiagRow> seq_diagnostics(int m, std::size_t N) {
    if (N < 1) throw ParseError("diagnostics require N >= 1");
    std::vector<SeqDiagRow> rows;
    rows.reserve(N);
    double sum = 0.0;
    RatioTermSequence seq(m, {});
    for (std::size_t i = 0; i < N; ++i) {
        RatioTerm t = seq.next();
        double x = std::log(to_double(t.ratio));
        sum += x;
        rows.push_back(SeqDiagRow{t.index, t.prime, t.ratio, x,
                                  static_cast<double>(t.prime) * x, sum});
    }
    return rows;
}

}  // namespace avgord
