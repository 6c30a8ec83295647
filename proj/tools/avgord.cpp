// avgord: element-order statistics of finite groups and constructive density
// certificates for target ratios o(G)/o(H).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "avgord/certificate.hpp"
#include "avgord/density.hpp"
#include "avgord/errors.hpp"
#include "avgord/group_expr.hpp"
#include "avgord/perm.hpp"
#include "avgord/primes.hpp"

namespace {

using namespace avgord;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitBaseInsufficient = 4;
constexpr int kExitResource = 5;
constexpr int kExitVerifyFail = 6;

std::string dec15(const BigRat& q) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", to_double(q));
    return buf;
}

// Exact string for small rationals; a size note for huge ones (full value is in
// the certificate file).
std::string brief(const BigRat& q) {
    std::string s = q.str();
    if (s.size() <= 80) return s;
    return "<rational with " + std::to_string(mpz_sizeinbase(q.num().get_mpz_t(), 10)) + "/" +
           std::to_string(mpz_sizeinbase(q.den().get_mpz_t(), 10)) + " digits>";
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << data;
}

int cmd_o(const std::string& expr_text, bool json) {
    GroupExpr expr = parse_group_expr(expr_text);
    BigInt ps = psi(expr);
    BigInt order = group_order(expr);
    BigRat o(ps, order);
    if (json) {
        nlohmann::json j;
        j["psi"] = ps.get_str();
        j["order"] = order.get_str();
        j["o"] = o.str();
        j["o_decimal"] = dec15(o);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "psi=" << ps.get_str() << " order=" << order.get_str() << " o=" << o.str()
                  << " ~" << dec15(o) << "\n";
    }
    return kExitOk;
}

int cmd_seq(int m, std::size_t count, bool json) {
    auto rows = seq_diagnostics(m, count);
    if (json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json j;
            j["n"] = r.n;
            j["p"] = r.prime;
            j["r"] = r.ratio.str();
            j["x"] = r.x;
            j["px"] = r.px;
            j["partial_sum"] = r.partial_sum;
            arr.push_back(std::move(j));
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::printf("%8s %12s %-24s %-14s %-14s %-14s\n", "n", "p_n", "r_n", "x_n=ln r_n",
                    "p_n*x_n", "sum x");
        for (const auto& r : rows)
            std::printf("%8zu %12llu %-24s %-14.8g %-14.8g %-14.8g\n", r.n,
                        static_cast<unsigned long long>(r.prime), r.ratio.str().c_str(), r.x, r.px,
                        r.partial_sum);
    }
    return kExitOk;
}

int cmd_verify(const std::string& path, bool json) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open certificate file: " << path << "\n";
        return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Certificate cert = parse_certificate(buf.str());
    Verdict v = verify(cert);
    if (json) {
        nlohmann::json j;
        j["ok"] = v.ok;
        j["unverifiable"] = v.unverifiable;
        j["recomputed_ratio"] = brief(v.recomputed_ratio);
        j["recomputed_decimal"] = dec15(v.recomputed_ratio);
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : v.checks) {
            nlohmann::json cj;
            cj["name"] = c.name;
            cj["status"] = c.status == CheckStatus::pass ? "pass"
                           : c.status == CheckStatus::fail ? "fail" : "unverifiable";
            cj["message"] = c.message;
            checks.push_back(std::move(cj));
        }
        j["checks"] = std::move(checks);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << verdict_report(v);
    }
    if (v.ok) return kExitOk;
    return v.unverifiable ? kExitResource : kExitVerifyFail;
}

int cmd_approx(const std::string& target_text, const std::string& eps_text, int m,
               const std::vector<std::size_t>& exclude, bool nilpotent, const std::string& base_key,
               const std::string& base_g, const std::string& base_h, bool plan,
               const std::string& out_path, std::size_t max_terms, bool json) {
    BigRat target = BigRat::parse(target_text);
    if (target.sign() < 0) throw ParseError("target must be >= 0");

    if (plan) {
        if (target >= BigRat(1)) throw ParseError("--plan requires a target in [0, 1)");
        KmzPlan kp = kmz_bound_plan(target);
        if (json) {
            nlohmann::json j;
            j["n"] = kp.n;
            j["p"] = kp.p;
            j["s"] = kp.s;
            j["bound"] = kp.bound.str();
            j["narrative"] = kp.narrative;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "plan: n=" << kp.n << " p=" << kp.p << " s=" << kp.s
                      << " bound=" << kp.bound.str() << " ~" << dec15(kp.bound) << "\n"
                      << kp.narrative << "\n";
        }
        return kExitOk;
    }
    if (target.is_zero())
        throw ParseError("target 0 is approached, not attained; use --plan for the recipe");

    BigRat eps = BigRat::parse(eps_text);
    std::set<std::size_t> J(exclude.begin(), exclude.end());

    Certificate cert;
    if (target >= BigRat(1)) {
        if (nilpotent) throw ParseError("--nilpotent applies to targets in (0, 1) only");
        cert = construct_ge1(target, eps, m, J, max_terms);
    } else if (!nilpotent) {
        cert = construct_le1_abelian(target, eps, m, max_terms);
    } else {
        BasePair base;
        if (!base_g.empty() || !base_h.empty()) {
            if (base_g.empty() || base_h.empty())
                throw ParseError("--base-g and --base-h must be given together");
            base = base_pair_from_perm_files(base_g, base_h);
        } else if (!base_key.empty()) {
            base = builtin_base_pair(base_key);
        } else {
            auto picked = pick_base_pair(target);
            if (!picked)
                throw BaseInsufficientError(
                    "no built-in base pair reaches below target " + target.str(),
                    kmz_bound_plan(target));
            base = *picked;
        }
        cert = construct_sub_unit_nilpotent(target, eps, base, m, max_terms);
    }

    std::string bytes = serialize(cert);
    write_file(out_path, bytes);
    if (json) {
        nlohmann::json j;
        j["mode"] = mode_str(cert.mode);
        j["target"] = cert.target.str();
        j["claimed_ratio"] = brief(cert.claimed_ratio);
        j["claimed_decimal"] = dec15(cert.claimed_ratio);
        j["terms"] = cert.trace.I.size();
        j["certificate"] = out_path;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "mode=" << mode_str(cert.mode) << " target=" << cert.target.str()
                  << " claimed=" << brief(cert.claimed_ratio) << " ~" << dec15(cert.claimed_ratio)
                  << " terms=" << cert.trace.I.size() << " -> " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_oracle_check(std::size_t max_order, bool json) {
    if (max_order > 4096)
        throw ResourceError("oracle check capped at order 4096, requested " +
                            std::to_string(max_order));

    // every elementary-divisor multiset with product <= max_order
    std::vector<BigInt> prime_powers;
    for (unsigned long v = 2; v <= max_order; ++v) {
        BigInt n(v);
        try {
            AbelianDescriptor probe;
            GroupExpr e = parse_group_expr("C(" + n.get_str() + ")");
            prime_powers.push_back(n);
        } catch (const ParseError&) {
        }
    }

    std::size_t groups_checked = 0, mismatches = 0;
    std::function<void(std::size_t, unsigned long, AbelianDescriptor&)> rec =
        [&](std::size_t start, unsigned long budget, AbelianDescriptor& acc) {
            // check current descriptor (including the trivial group once)
            OrderDistribution fast = abelian_order_distribution(acc);
            std::vector<Permutation> gens;
            std::uint32_t offset = 0;
            for (const auto& [p, e] : acc.factors) {
                BigInt pe;
                mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
                std::uint32_t len = static_cast<std::uint32_t>(pe.get_ui());
                std::vector<std::uint32_t> img(offset + len);
                for (std::uint32_t i = 0; i < offset + len; ++i) img[i] = i;
                for (std::uint32_t i = 0; i < len; ++i) img[offset + i] = offset + (i + 1) % len;
                gens.push_back(Permutation(std::move(img)));
                offset += len;
            }
            OrderDistribution slow = gens.empty()
                                         ? trivial_distribution()
                                         : order_distribution_bruteforce(PermGroup(gens));
            ++groups_checked;
            if (!(fast == slow)) ++mismatches;

            for (std::size_t i = start; i < prime_powers.size(); ++i) {
                unsigned long v = prime_powers[i].get_ui();
                if (v > budget) continue;
                GroupExpr term = parse_group_expr("C(" + std::to_string(v) + ")");
                acc.factors.push_back(term.abelian.factors[0]);
                acc.normalize();
                rec(i, budget / v, acc);
                // remove the factor again
                auto it = std::find(acc.factors.begin(), acc.factors.end(),
                                    term.abelian.factors[0]);
                acc.factors.erase(it);
            }
        };
    AbelianDescriptor acc;
    rec(0, max_order, acc);

    // cyclic closed form for all p^k <= max_order
    std::size_t cyclic_checked = 0, cyclic_mismatches = 0;
    for (const BigInt& pp : prime_powers) {
        GroupExpr e = parse_group_expr("C(" + pp.get_str() + ")");
        const auto& [p, k] = e.abelian.factors[0];
        ++cyclic_checked;
        if (cyclic_psi_closed(p, k) != psi(abelian_order_distribution(e.abelian)))
            ++cyclic_mismatches;
    }

    // registry distributions against the permutation oracle
    std::size_t registry_checked = 0, registry_mismatches = 0;
    for (const std::string& key : {"C4", "D4", "Q8", "DihTwo(3)", "DihTwo(4)", "DihTwo(5)"}) {
        auto named = find_named(key);
        OrderDistribution brute = order_distribution_bruteforce(PermGroup(named_generators(key)));
        ++registry_checked;
        if (!(named->dist == brute)) ++registry_mismatches;
    }

    bool ok = mismatches == 0 && cyclic_mismatches == 0 && registry_mismatches == 0;
    if (json) {
        nlohmann::json j;
        j["max_order"] = max_order;
        j["abelian_groups_checked"] = groups_checked;
        j["abelian_mismatches"] = mismatches;
        j["cyclic_checked"] = cyclic_checked;
        j["cyclic_mismatches"] = cyclic_mismatches;
        j["registry_checked"] = registry_checked;
        j["registry_mismatches"] = registry_mismatches;
        j["ok"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "abelian distributions vs brute force: " << groups_checked << " groups, "
                  << mismatches << " mismatches\n"
                  << "cyclic psi closed form: " << cyclic_checked << " prime powers, "
                  << cyclic_mismatches << " mismatches\n"
                  << "registry vs oracle: " << registry_checked << " groups, "
                  << registry_mismatches << " mismatches\n"
                  << (ok ? "oracle check: ok\n" : "oracle check: FAILED\n");
    }
    return ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* cap = std::getenv("AVGORD_PRIME_CAP")) {
        try {
            set_prime_cap(std::stoull(cap));
        } catch (const std::exception&) {
            std::cerr << "error: AVGORD_PRIME_CAP is not a number: " << cap << "\n";
            return kExitUsage;
        }
    }

    CLI::App app{"element-order statistics and density certificates for finite nilpotent groups"};
    app.require_subcommand(1);

    std::string o_expr;
    bool o_json = false;
    auto* sub_o = app.add_subcommand("o", "psi, |G| and the average order of a group expression");
    sub_o->add_option("expr", o_expr, "group expression, e.g. \"C(2)^3 x C(9) x D4\"");
    sub_o->add_flag("--json", o_json, "machine-readable output");

    std::string ap_target, ap_eps = "1/1000000", ap_base, ap_base_g, ap_base_h;
    std::string ap_out = "certificate.ogcert.json";
    int ap_m = 2;
    std::vector<std::size_t> ap_exclude;
    bool ap_nilpotent = false, ap_plan = false, ap_json = false;
    std::size_t ap_max_terms = kDefaultMaxTerms;
    auto* sub_ap = app.add_subcommand("approx", "construct a certificate for a target ratio");
    sub_ap->add_option("--target", ap_target, "target ratio (rational or decimal literal)")
        ->required();
    sub_ap->add_option("--eps", ap_eps, "relative tolerance (> 0)");
    sub_ap->add_option("--m", ap_m, "power m >= 2 of the construction sequence");
    sub_ap->add_option("--exclude", ap_exclude, "prime indices to exclude")->delimiter(',');
    sub_ap->add_flag("--nilpotent", ap_nilpotent, "use the nonabelian nilpotent composer");
    sub_ap->add_option("--base", ap_base, "base pair key (D4C4, DihTwo(k))");
    sub_ap->add_option("--base-g", ap_base_g, "generator file for a custom base group");
    sub_ap->add_option("--base-h", ap_base_h, "generator file for its subgroup");
    sub_ap->add_flag("--plan", ap_plan, "emit the bound plan instead of a certificate");
    sub_ap->add_option("-o,--out", ap_out, "certificate output path");
    sub_ap->add_option("--max-terms", ap_max_terms, "greedy term budget");
    sub_ap->add_flag("--json", ap_json, "machine-readable output");

    std::string vf_path;
    bool vf_json = false;
    auto* sub_vf = app.add_subcommand("verify", "independently verify a certificate file");
    sub_vf->add_option("path", vf_path, "certificate file (.ogcert.json)")->required();
    sub_vf->add_flag("--json", vf_json, "machine-readable output");

    std::size_t oc_max_order = 512;
    bool oc_json = false;
    auto* sub_oc = app.add_subcommand("oracle-check", "closed forms vs brute-force enumeration");
    sub_oc->add_option("--max-order", oc_max_order, "largest group order to enumerate");
    sub_oc->add_flag("--json", oc_json, "machine-readable output");

    int sq_m = 2;
    std::size_t sq_count = 10;
    bool sq_json = false;
    auto* sub_sq = app.add_subcommand("seq", "term-sequence diagnostics table");
    sub_sq->add_option("--m", sq_m, "power m >= 2");
    sub_sq->add_option("--count", sq_count, "number of rows");
    sub_sq->add_flag("--json", sq_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sub_o->parsed()) return cmd_o(o_expr, o_json);
        if (sub_ap->parsed())
            return cmd_approx(ap_target, ap_eps, ap_m, ap_exclude, ap_nilpotent, ap_base, ap_base_g,
                              ap_base_h, ap_plan, ap_out, ap_max_terms, ap_json);
        if (sub_vf->parsed()) return cmd_verify(vf_path, vf_json);
        if (sub_oc->parsed()) return cmd_oracle_check(oc_max_order, oc_json);
        if (sub_sq->parsed()) return cmd_seq(sq_m, sq_count, sq_json);
    } catch (const avgord::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const avgord::BaseInsufficientError& e) {
        std::cerr << "base pair insufficient: " << e.what() << "\n" << e.plan.narrative << "\n";
        return kExitBaseInsufficient;
    } catch (const avgord::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const avgord::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const avgord::OverflowError& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return kExitResource;
    }
    return kExitUsage;
}
