#include "avgord/certificate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "avgord/density.hpp"
#include "avgord/errors.hpp"
#include "avgord/perm.hpp"
#include "avgord/primes.hpp"

namespace avgord {

std::string mode_str(Mode m) {
    switch (m) {
        case Mode::ge1: return "ge1";
        case Mode::le1_abelian: return "le1_abelian";
        case Mode::sub_unit_nilpotent: return "sub_unit_nilpotent";
    }
    return "";
}

Mode parse_mode(const std::string& s) {
    if (s == "ge1") return Mode::ge1;
    if (s == "le1_abelian") return Mode::le1_abelian;
    if (s == "sub_unit_nilpotent") return Mode::sub_unit_nilpotent;
    throw ParseError("unknown certificate mode: " + s);
}

std::string serialize(const Certificate& cert) {
    nlohmann::json j;
    j["version"] = cert.version;
    j["mode"] = mode_str(cert.mode);
    j["target"] = cert.target.str();
    j["eps"] = cert.eps.str();
    j["g"] = group_expr_str(cert.g);
    j["h"] = group_expr_str(cert.h);
    j["claimed_ratio"] = cert.claimed_ratio.str();
    nlohmann::json trace;
    trace["m"] = cert.trace.m;
    trace["J"] = cert.trace.J;
    trace["I"] = cert.trace.I;
    trace["base_pair"] = cert.trace.base_pair ? nlohmann::json(*cert.trace.base_pair)
                                              : nlohmann::json(nullptr);
    j["trace"] = std::move(trace);
    return j.dump(2) + "\n";
}

Certificate parse_certificate(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
    }
    auto field = [&](const char* name) -> const nlohmann::json& {
        if (!j.contains(name)) throw ParseError(std::string("certificate missing field: ") + name);
        return j.at(name);
    };
    // every per-field error names the offending field
    auto in_field = [&](const char* name, auto parse_fn) {
        try {
            return parse_fn(field(name));
        } catch (const ParseError& e) {
            throw ParseError(std::string("certificate field '") + name + "': " + e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("certificate field '") + name +
                             "' has wrong type: " + e.what());
        }
    };
    auto as_str = [](const nlohmann::json& v) { return v.get<std::string>(); };
    Certificate cert;
    cert.version = in_field("version", as_str);
    cert.mode = in_field("mode", [&](const nlohmann::json& v) { return parse_mode(as_str(v)); });
    cert.target =
        in_field("target", [&](const nlohmann::json& v) { return BigRat::parse(as_str(v)); });
    cert.eps = in_field("eps", [&](const nlohmann::json& v) { return BigRat::parse(as_str(v)); });
    cert.g = in_field("g", [&](const nlohmann::json& v) { return parse_group_expr(as_str(v)); });
    cert.h = in_field("h", [&](const nlohmann::json& v) { return parse_group_expr(as_str(v)); });
    cert.claimed_ratio = in_field(
        "claimed_ratio", [&](const nlohmann::json& v) { return BigRat::parse(as_str(v)); });
    const auto& trace = field("trace");
    try {
        cert.trace.m = trace.at("m").get<int>();
        cert.trace.J = trace.at("J").get<std::vector<std::size_t>>();
        cert.trace.I = trace.at("I").get<std::vector<std::size_t>>();
        if (trace.contains("base_pair") && !trace.at("base_pair").is_null())
            cert.trace.base_pair = trace.at("base_pair").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("certificate field 'trace' malformed: ") + e.what());
    }
    return cert;
}

namespace {

// Keep check messages readable when ratios run to millions of digits.
std::string brief_ratio(const BigRat& q) {
    std::string s = q.str();
    if (s.size() <= 80) return s;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", to_double(q));
    return std::string("~") + buf + " (" +
           std::to_string(mpz_sizeinbase(q.num().get_mpz_t(), 10)) + "/" +
           std::to_string(mpz_sizeinbase(q.den().get_mpz_t(), 10)) + " digits)";
}

bool all_abelian(const GroupExpr& e) {
    switch (e.kind) {
        case GroupExpr::Kind::Abelian: return true;
        case GroupExpr::Kind::Product:
            for (const auto& c : e.children)
                if (!all_abelian(c)) return false;
            return true;
        default: return false;
    }
}

const GroupExpr* leading_nonabelian(const GroupExpr& e) {
    if (e.kind == GroupExpr::Kind::Named || e.kind == GroupExpr::Kind::Perm) return &e;
    if (e.kind == GroupExpr::Kind::Product)
        for (const auto& c : e.children)
            if (const GroupExpr* f = leading_nonabelian(c)) return f;
    return nullptr;
}

// Rebuild the expected group pair from the trace; nullopt when the trace
// references a base pair we cannot reconstruct (user-supplied).
std::optional<std::pair<std::string, std::string>> rebuild_from_trace(const Certificate& cert) {
    std::vector<GroupExpr> gp, hp;
    if (cert.mode == Mode::sub_unit_nilpotent) {
        if (!cert.trace.base_pair || *cert.trace.base_pair == "custom") return std::nullopt;
        BasePair bp = builtin_base_pair(*cert.trace.base_pair);
        if (!cert.trace.I.empty()) {
            gp.push_back(bp.g0);
            hp.push_back(bp.h0);
        } else {
            return std::make_pair(group_expr_str(bp.g0), group_expr_str(bp.h0));
        }
    }
    for (std::size_t n : cert.trace.I) {
        BigInt p(static_cast<unsigned long>(nth_prime(n)));
        AbelianDescriptor dg, dh;
        for (int i = 0; i < cert.trace.m; ++i) dg.factors.emplace_back(p, 1);
        dh.factors.emplace_back(p, 1);
        gp.push_back(GroupExpr::from_abelian(std::move(dg)));
        hp.push_back(GroupExpr::from_abelian(std::move(dh)));
    }
    return std::make_pair(group_expr_str(GroupExpr::product(std::move(gp))),
                          group_expr_str(GroupExpr::product(std::move(hp))));
}

}  // namespace

Verdict verify(const Certificate& cert) {
    Verdict v;
    auto add = [&](const std::string& name, CheckStatus st, const std::string& msg) {
        v.checks.push_back(CheckItem{name, st, msg});
    };

    if (cert.version != "1")
        add("version", CheckStatus::fail, "unsupported certificate version: " + cert.version);
    else
        add("version", CheckStatus::pass, "version 1");

    // ratio, recomputed from the group expressions alone
    bool have_ratio = false;
    try {
        BigRat og = avg_order(cert.g);
        BigRat oh = avg_order(cert.h);
        v.recomputed_ratio = cert.mode == Mode::le1_abelian ? oh / og : og / oh;
        have_ratio = true;
        add("ratio-recomputed", CheckStatus::pass, "ratio = " + brief_ratio(v.recomputed_ratio));
    } catch (const ResourceError& e) {
        add("ratio-recomputed", CheckStatus::unverifiable, e.what());
    } catch (const std::exception& e) {
        add("ratio-recomputed", CheckStatus::fail, e.what());
    }

    if (have_ratio) {
        if (v.recomputed_ratio == cert.claimed_ratio)
            add("claimed-ratio-exact", CheckStatus::pass, "claimed ratio matches exactly");
        else
            add("claimed-ratio-exact", CheckStatus::fail,
                "claimed " + brief_ratio(cert.claimed_ratio) + " != recomputed " +
                    brief_ratio(v.recomputed_ratio));
    } else {
        add("claimed-ratio-exact", CheckStatus::unverifiable, "ratio not recomputable");
    }

    // tolerance, against the recomputed ratio when available
    const BigRat& r = have_ratio ? v.recomputed_ratio : cert.claimed_ratio;
    bool tol_ok;
    if (cert.mode == Mode::le1_abelian)
        tol_ok = cert.target <= r && r <= cert.target * (BigRat(1) + cert.eps);
    else
        tol_ok = r <= cert.target && cert.target <= r * (BigRat(1) + cert.eps);
    add("tolerance", tol_ok ? CheckStatus::pass : CheckStatus::fail,
        tol_ok ? "ratio within the mode's tolerance of the target"
               : "ratio " + r.str() + " misses target " + cert.target.str() + " at eps " +
                     cert.eps.str());

    try {
        if (subgroup_witness(cert.g, cert.h))
            add("subgroup-witness", CheckStatus::pass, "structural inclusion attested");
        else
            add("subgroup-witness", CheckStatus::fail, "no structural inclusion of h into g");
    } catch (const ResourceError& e) {
        add("subgroup-witness", CheckStatus::unverifiable, e.what());
    } catch (const std::exception& e) {
        add("subgroup-witness", CheckStatus::fail, e.what());
    }

    // coprimality of composed parts
    auto coprime_ok = [](const GroupExpr& e) {
        return e.kind != GroupExpr::Kind::Product || pairwise_coprime(e.children);
    };
    try {
        if (coprime_ok(cert.g) && coprime_ok(cert.h))
            add("coprime-parts", CheckStatus::pass, "product factors pairwise coprime");
        else
            add("coprime-parts", CheckStatus::fail, "product factors share a prime");
    } catch (const ResourceError& e) {
        add("coprime-parts", CheckStatus::unverifiable, e.what());
    }

    // mode-specific structure
    if (cert.mode == Mode::sub_unit_nilpotent) {
        const GroupExpr* base = leading_nonabelian(cert.g);
        if (!base) {
            add("nilpotency", CheckStatus::pass, "g is abelian, hence nilpotent");
        } else {
            try {
                PermGroup pg = base->kind == GroupExpr::Kind::Named
                                   ? PermGroup(named_generators(base->name))
                                   : load_perm_group(base->perm_path);
                if (nilpotency_check(pg))
                    add("nilpotency", CheckStatus::pass, "base group passes the nilpotency check");
                else
                    add("nilpotency", CheckStatus::fail, "base group is not nilpotent");
            } catch (const ResourceError& e) {
                add("nilpotency", CheckStatus::unverifiable, e.what());
            } catch (const std::exception& e) {
                add("nilpotency", CheckStatus::fail, e.what());
            }
        }
    } else {
        if (all_abelian(cert.g) && all_abelian(cert.h))
            add("mode-structure", CheckStatus::pass, "abelian-mode certificate is fully abelian");
        else
            add("mode-structure", CheckStatus::fail,
                "mode " + mode_str(cert.mode) + " requires abelian groups");
    }

    // trace cross-check (consistency only; never used for the ratio)
    try {
        bool increasing = std::is_sorted(cert.trace.I.begin(), cert.trace.I.end()) &&
                          std::adjacent_find(cert.trace.I.begin(), cert.trace.I.end()) ==
                              cert.trace.I.end();
        bool disjoint = true;
        for (std::size_t n : cert.trace.I)
            if (std::find(cert.trace.J.begin(), cert.trace.J.end(), n) != cert.trace.J.end())
                disjoint = false;
        auto rebuilt = rebuild_from_trace(cert);
        bool matches = !rebuilt || (rebuilt->first == group_expr_str(cert.g) &&
                                    rebuilt->second == group_expr_str(cert.h));
        if (increasing && disjoint && matches)
            add("trace-consistency", CheckStatus::pass,
                rebuilt ? "trace rebuilds the stated groups" : "custom base pair: rebuild skipped");
        else
            add("trace-consistency", CheckStatus::fail,
                !increasing ? "trace indices not strictly increasing"
                            : (!disjoint ? "trace I intersects excluded set J"
                                         : "trace does not rebuild the stated groups"));
    } catch (const ResourceError& e) {
        add("trace-consistency", CheckStatus::unverifiable, e.what());
    } catch (const std::exception& e) {
        add("trace-consistency", CheckStatus::fail, e.what());
    }

    bool any_fail = false, any_unver = false;
    for (const auto& c : v.checks) {
        any_fail |= c.status == CheckStatus::fail;
        any_unver |= c.status == CheckStatus::unverifiable;
    }
    v.ok = !any_fail && !any_unver;
    v.unverifiable = !any_fail && any_unver;
    return v;
}

std::string verdict_report(const Verdict& v) {
    std::ostringstream out;
    for (const auto& c : v.checks) {
        const char* tag = c.status == CheckStatus::pass ? "PASS"
                          : c.status == CheckStatus::fail ? "FAIL" : "UNVERIFIABLE";
        out << "[" << tag << "] " << c.name << ": " << c.message << "\n";
    }
    out << "verdict: " << (v.ok ? "ok" : v.unverifiable ? "unverifiable" : "fail") << "\n";
    return out.str();
}

}  // namespace avgord
