// Acceptance suite: twelve criteria, one pass/fail line each.
// Every check is exact unless explicitly labeled a float diagnostic.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "avgord/certificate.hpp"
#include "avgord/density.hpp"
#include "avgord/group_expr.hpp"
#include "avgord/perm.hpp"
#include "avgord/primes.hpp"

using namespace avgord;

namespace {

const std::string kData = TEST_DATA_DIR;

int g_failures = 0;

void report(int n, bool pass, const std::string& detail, double seconds) {
    std::printf("criterion %2d: %s — %s (%.1fs)\n", n, pass ? "PASS" : "FAIL", detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

template <typename F>
void timed(int n, F body, double limit_seconds = 0.0) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0.0 && secs >= limit_seconds) {
        pass = false;
        detail += "; over the " + std::to_string(static_cast<int>(limit_seconds)) + "s limit";
    }
    report(n, pass, detail, secs);
}

// all elementary-divisor multisets with order <= max_order
void for_each_abelian(unsigned long max_order,
                      const std::function<void(const AbelianDescriptor&)>& fn) {
    std::vector<std::pair<BigInt, unsigned>> pps;  // prime powers <= max_order
    for (unsigned long v = 2; v <= max_order; ++v) {
        BigInt n(v);
        if (mpz_probab_prime_p(n.get_mpz_t(), 32) != 0) {
            pps.emplace_back(n, 1u);
            continue;
        }
        for (unsigned e = 2; (1ul << e) <= v; ++e) {
            BigInt root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0 &&
                mpz_probab_prime_p(root.get_mpz_t(), 32) != 0) {
                pps.emplace_back(root, e);
                break;
            }
        }
    }
    AbelianDescriptor acc;
    std::function<void(std::size_t, unsigned long)> rec = [&](std::size_t start,
                                                              unsigned long budget) {
        fn(acc);
        for (std::size_t i = start; i < pps.size(); ++i) {
            const auto& [p, e] = pps[i];
            BigInt pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
            unsigned long v = pe.get_ui();
            if (v > budget) continue;
            acc.factors.push_back(pps[i]);
            rec(i, budget / v);
            acc.factors.pop_back();
        }
    };
    rec(0, max_order);
}

// cyclic permutation realization of an abelian descriptor: one cycle per factor
PermGroup realize_abelian(const AbelianDescriptor& d) {
    std::vector<Permutation> gens;
    std::uint32_t offset = 0;
    for (const auto& [p, e] : d.factors) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        std::uint32_t len = static_cast<std::uint32_t>(pe.get_ui());
        std::vector<std::uint32_t> img(offset + len);
        for (std::uint32_t i = 0; i < img.size(); ++i) img[i] = i;
        for (std::uint32_t i = 0; i < len; ++i) img[offset + i] = offset + (i + 1) % len;
        gens.push_back(Permutation(std::move(img)));
        offset += len;
    }
    if (gens.empty()) gens.push_back(Permutation::identity(1));
    return PermGroup(gens);
}

BigRat avg_order_of_elements(const std::vector<Permutation>& elems) {
    BigInt sum = 0;
    for (const Permutation& x : elems) sum += x.order();
    return BigRat(sum, BigInt(static_cast<unsigned long>(elems.size())));
}

BigRat random_rational(std::mt19937_64& rng, long lo, long hi) {
    long den = 1 + static_cast<long>(rng() % 1000);
    unsigned long span = static_cast<unsigned long>((hi - lo) * den);
    long num = lo * den + static_cast<long>(rng() % (span + 1));
    if (num == 0) num = 1;  // (0, hi] draws stay strictly positive
    return BigRat(num, den);
}

bool within_ge1_tolerance(const Certificate& c) {
    return c.claimed_ratio <= c.target &&
           c.target <= c.claimed_ratio * (BigRat(1) + c.eps);
}

bool within_le1_tolerance(const Certificate& c) {
    return c.target <= c.claimed_ratio &&
           c.claimed_ratio <= c.target * (BigRat(1) + c.eps);
}

bool contains_nonabelian(const GroupExpr& e) {
    if (e.kind == GroupExpr::Kind::Named || e.kind == GroupExpr::Kind::Perm) return true;
    if (e.kind == GroupExpr::Kind::Product)
        for (const auto& c : e.children)
            if (contains_nonabelian(c)) return true;
    return false;
}

// serialized certificates produced by criteria 3-6, replayed by criterion 12
std::vector<std::pair<std::string, std::string>> g_cert_log;  // (label, bytes)

void log_cert(const std::string& label, const Certificate& c) {
    g_cert_log.emplace_back(label, serialize(c));
}

}  // namespace

int main() {
    // 1. formula identity: distribution route == closed fraction
    timed(1, [](std::string& d) {
        for (std::size_t n = 1; n <= 200; ++n) {
            BigInt p(static_cast<unsigned long>(nth_prime(n)));
            for (int m = 2; m <= 6; ++m)
                if (RatioTermSequence::term_from_distributions(p, m) !=
                    RatioTermSequence::term_closed_form(p, m)) {
                    d = "mismatch at p=" + p.get_str() + " m=" + std::to_string(m);
                    return false;
                }
        }
        d = "200 primes x m in {2..6}, exact equality";
        return true;
    }, 10.0);

    // 2. limit behavior of x_n = ln r_n at m = 2 (float diagnostics)
    timed(2, [](std::string& d) {
        auto rows = seq_diagnostics(2, 10000);
        bool positive = true, decreasing = true;
        std::size_t first_increase = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].x <= 0.0) positive = false;
            if (i > 0 && rows[i].x >= rows[i - 1].x && decreasing) {
                decreasing = false;
                first_increase = i + 1;
            }
        }
        bool tail_small = rows.back().x < 1e-4;
        bool px_near_1 = std::abs(rows.back().px - 1.0) < 0.01;
        d = "positive=" + std::string(positive ? "yes" : "no") +
            " decreasing=" + (decreasing ? "yes" : "no (first increase at n=" +
                                                       std::to_string(first_increase) + ")") +
            " x_10000=" + std::to_string(rows.back().x) +
            " |p*x-1|=" + std::to_string(std::abs(rows.back().px - 1.0));
        return positive && decreasing && tail_small && px_near_1;
    }, 30.0);

    // 3. divergence witness: targets 10, 100, 10^6 under a 10^6-term budget
    timed(3, [](std::string& d) {
        bool all = true;
        for (const char* t : {"10", "100", "1000000"}) {
            BigRat target = BigRat::parse(t);
            try {
                Certificate c = construct_ge1(target, BigRat(1, 1000));
                log_cert(std::string("c3:") + t, c);
                Verdict v = verify(c);
                if (!v.ok) {
                    d += std::string(t) + ": certificate failed verification; ";
                    all = false;
                } else {
                    d += std::string(t) + ": ok (" + std::to_string(c.trace.I.size()) +
                         " terms); ";
                }
            } catch (const BudgetError& e) {
                d += std::string(t) + ": budget exhausted at ~" +
                     std::to_string(e.achieved_approx) + " after " + std::to_string(e.scanned) +
                     " terms; ";
                all = false;
            }
        }
        return all;
    }, 120.0);

    // 4. constructor soundness on random targets in [1, 50], eps = 10^-6
    timed(4, [](std::string& d) {
        std::mt19937_64 rng(42);
        BigRat eps(1, 1000000);
        int ok = 0, budget = 0, bad = 0;
        for (int i = 0; i < 100; ++i) {
            BigRat a = random_rational(rng, 1, 50);
            try {
                Certificate c = construct_ge1(a, eps);
                log_cert("c4:" + a.str(), c);
                if (verify(c).ok && within_ge1_tolerance(c))
                    ++ok;
                else
                    ++bad;
            } catch (const BudgetError&) {
                ++budget;
            }
        }
        d = std::to_string(ok) + "/100 verified in tolerance, " + std::to_string(budget) +
            " exceeded the term budget, " + std::to_string(bad) + " invalid";
        return ok == 100;
    }, 120.0);

    // 5. inverse constructor on random targets in (0, 1], eps = 10^-6
    timed(5, [](std::string& d) {
        std::mt19937_64 rng(43);
        BigRat eps(1, 1000000);
        int ok = 0, budget = 0, bad = 0;
        for (int i = 0; i < 100; ++i) {
            BigRat a = random_rational(rng, 0, 1);
            try {
                Certificate c = construct_le1_abelian(a, eps);
                log_cert("c5:" + a.str(), c);
                if (verify(c).ok && within_le1_tolerance(c))
                    ++ok;
                else
                    ++bad;
            } catch (const BudgetError&) {
                ++budget;
            }
        }
        d = std::to_string(ok) + "/100 verified in tolerance, " + std::to_string(budget) +
            " exceeded the term budget, " + std::to_string(bad) + " invalid";
        return ok == 100;
    });

    // 6. sub-unit nilpotent composition with built-in base pairs
    timed(6, [](std::string& d) {
        BigRat eps(1, 10000);
        bool all = true;
        for (const char* t : {"19/22", "0.9", "0.99", "0.6"}) {
            BigRat a = BigRat::parse(t);
            auto base = pick_base_pair(a);
            if (!base) {
                d += std::string(t) + ": no base; ";
                all = false;
                continue;
            }
            Certificate c = construct_sub_unit_nilpotent(a, eps, *base);
            log_cert(std::string("c6:") + t, c);
            bool v = verify(c).ok && within_ge1_tolerance(c) && contains_nonabelian(c.g);
            if (a == BigRat(19, 22))
                v = v && c.claimed_ratio == BigRat(19, 22) && c.trace.I.empty();
            if (!v) {
                d += std::string(t) + ": failed; ";
                all = false;
            }
        }
        if (all) d = "4/4 nonabelian nilpotent certificates verified; 19/22 exact, empty tail";
        return all;
    });

    // 7. the p^3/p^p bound plan
    timed(7, [](std::string& d) {
        KmzPlan plan = kmz_bound_plan(BigRat::parse("1e-3"));
        bool first = plan.n == 4 && plan.bound == BigRat(343, 823543) &&
                     plan.bound == BigRat(1, 2401);
        bool monotone = true;
        BigRat prev;
        for (std::size_t n = 4; n <= 15; ++n) {
            BigInt p(static_cast<unsigned long>(nth_prime(n)));
            BigInt p3, pp;
            mpz_pow_ui(p3.get_mpz_t(), p.get_mpz_t(), 3);
            mpz_pow_ui(pp.get_mpz_t(), p.get_mpz_t(), p.get_ui());
            BigRat bound(p3, pp);
            if (n > 4 && bound >= prev) monotone = false;
            prev = bound;
        }
        d = std::string("plan(10^-3): n=") + std::to_string(plan.n) + " bound=" +
            plan.bound.str() + "; bounds strictly decreasing for n=4..15: " +
            (monotone ? "yes" : "no");
        return first && monotone;
    });

    // 8. oracle equivalence up to order 512
    timed(8, [](std::string& d) {
        std::size_t groups = 0, mismatches = 0;
        for_each_abelian(512, [&](const AbelianDescriptor& desc) {
            ++groups;
            OrderDistribution fast = abelian_order_distribution(desc);
            OrderDistribution slow = order_distribution_bruteforce(realize_abelian(desc));
            if (!(fast == slow)) ++mismatches;
        });
        std::size_t cyclic = 0, cyclic_bad = 0;
        for_each_abelian(512, [&](const AbelianDescriptor& desc) {
            if (desc.factors.size() != 1) return;
            ++cyclic;
            const auto& [p, e] = desc.factors[0];
            AbelianDescriptor single;
            single.factors.push_back({p, e});
            if (cyclic_psi_closed(p, e) != psi(abelian_order_distribution(single))) ++cyclic_bad;
        });
        d = std::to_string(groups) + " abelian groups vs enumeration, " +
            std::to_string(mismatches) + " mismatches; " + std::to_string(cyclic) +
            " prime powers vs closed form, " + std::to_string(cyclic_bad) + " mismatches";
        return mismatches == 0 && cyclic_bad == 0;
    }, 300.0);

    // 9. o(G) >= o(Z(G)) over the registry and the permutation corpus
    timed(9, [](std::string& d) {
        std::size_t checked = 0;
        std::vector<PermGroup> corpus;
        for (const char* key : {"C4", "D4", "Q8", "DihTwo(3)", "DihTwo(4)"})
            corpus.push_back(PermGroup(named_generators(key)));
        for (const char* f : {"s3.perm", "a4.perm", "d4.perm", "c4.perm", "c12.perm", "d6.perm",
                              "c2c2.perm", "dih8.perm", "c8.perm"})
            corpus.push_back(load_perm_group(kData + "/" + f));
        for (const PermGroup& g : corpus) {
            auto elems = enumerate(g);
            if (elems.size() > 64) continue;
            ++checked;
            if (avg_order_of_elements(elems) < avg_order_of_elements(center(g))) {
                d = "violated for a group of order " + std::to_string(elems.size());
                return false;
            }
        }
        d = std::to_string(checked) + " groups of order <= 64, inequality holds exactly";
        return true;
    });

    // 10. o(G)/o(H) >= 1 over the full subgroup lattice, abelian order <= 64
    timed(10, [](std::string& d) {
        std::size_t pairs = 0;
        bool ok = true;
        for_each_abelian(64, [&](const AbelianDescriptor& desc) {
            if (!ok) return;
            PermGroup g = realize_abelian(desc);
            BigRat og = avg_order(abelian_order_distribution(desc));
            for (const auto& sub : subgroup_lattice(g)) {
                ++pairs;
                if (og < avg_order_of_elements(sub)) ok = false;
            }
        });
        d = std::to_string(pairs) + " (group, subgroup) pairs, ratio >= 1 exactly";
        return ok;
    });

    // 11. multiplicativity over coprime pairs, with a non-coprime control
    timed(11, [](std::string& d) {
        std::mt19937_64 rng(44);
        const long primes_a[] = {2, 3, 5}, primes_b[] = {7, 11, 13};
        for (int i = 0; i < 500; ++i) {
            AbelianDescriptor a, b;
            for (long p : primes_a)
                for (unsigned e = 1; e <= 2; ++e)
                    if (rng() % 2) a.factors.push_back({BigInt(p), e});
            for (long p : primes_b)
                for (unsigned e = 1; e <= 2; ++e)
                    if (rng() % 2) b.factors.push_back({BigInt(p), e});
            a.normalize();
            b.normalize();
            OrderDistribution da = abelian_order_distribution(a);
            OrderDistribution db = abelian_order_distribution(b);
            if (avg_order(lcm_convolve(da, db)) != avg_order(da) * avg_order(db)) {
                d = "multiplicativity violated at trial " + std::to_string(i);
                return false;
            }
        }
        // non-coprime control: o(C2 x C2) = 7/4, not o(C2)^2 = 9/4
        GroupExpr c2 = parse_group_expr("C(2)");
        GroupExpr c2c2 = parse_group_expr("C(2)^2");
        bool control = avg_order(c2c2) == BigRat(7, 4) &&
                       avg_order(c2) * avg_order(c2) == BigRat(9, 4) &&
                       avg_order(c2c2) != avg_order(c2) * avg_order(c2);
        d = "500 coprime pairs exactly multiplicative; non-coprime control 7/4 != 9/4";
        return control;
    });

    // 12. determinism: replay the constructions from criteria 3-6 byte for byte
    timed(12, [](std::string& d) {
        std::size_t replayed = 0, diffs = 0;
        for (const auto& [label, bytes] : g_cert_log) {
            auto colon = label.find(':');
            std::string kind = label.substr(0, colon);
            BigRat a = BigRat::parse(label.substr(colon + 1));
            Certificate again;
            if (kind == "c3")
                again = construct_ge1(a, BigRat(1, 1000));
            else if (kind == "c4")
                again = construct_ge1(a, BigRat(1, 1000000));
            else if (kind == "c5")
                again = construct_le1_abelian(a, BigRat(1, 1000000));
            else
                again = construct_sub_unit_nilpotent(a, BigRat(1, 10000), *pick_base_pair(a));
            ++replayed;
            if (serialize(again) != bytes) ++diffs;
        }
        d = std::to_string(replayed) + " certificates replayed, " + std::to_string(diffs) +
            " byte differences";
        return replayed > 0 && diffs == 0;
    });

    std::printf("acceptance: %d of 12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
