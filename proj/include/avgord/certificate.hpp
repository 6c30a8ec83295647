#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avgord/group_expr.hpp"
#include "avgord/rational.hpp"

namespace avgord {

enum class Mode { ge1, le1_abelian, sub_unit_nilpotent };

std::string mode_str(Mode m);
Mode parse_mode(const std::string& s);

struct CertificateTrace {
    int m = 2;
    std::vector<std::size_t> J;  // excluded prime indices
    std::vector<std::size_t> I;  // included prime indices
    std::optional<std::string> base_pair;
};

/// Full witness of one construction: target, tolerance, the groups, the
/// exact claimed ratio and the construction trace. Everything the verifier
/// needs is recomputable from g and h alone; the trace is cross-checked,
/// never trusted.
///
/// Tolerance convention, recorded per mode:
///   ge1, sub_unit_nilpotent:  claimed <= target <= claimed * (1 + eps)
///   le1_abelian:              target <= claimed <= target * (1 + eps)
struct Certificate {
    Mode mode = Mode::ge1;
    BigRat target;
    BigRat eps;
    GroupExpr g;  // the group
    GroupExpr h;  // the subgroup
    BigRat claimed_ratio;
    CertificateTrace trace;
    std::string version = "1";
};

enum class CheckStatus { pass, fail, unverifiable };

struct CheckItem {
    std::string name;
    CheckStatus status;
    std::string message;
};

struct Verdict {
    bool ok = false;            // every check passed
    bool unverifiable = false;  // no failure, but some check hit an oracle cap
    BigRat recomputed_ratio;
    std::vector<CheckItem> checks;
};

/// Recomputes the ratio from first principles (never trusting claimed_ratio
/// or the trace), then checks exact equality, the mode's tolerance, the
/// subgroup witness, coprimality of composed parts, and nilpotency of the
/// base where a permutation realization is available.
Verdict verify(const Certificate& cert);

/// Canonical serialization: UTF-8 JSON with sorted keys, rationals as
/// "num/den" strings, group expressions in the descriptor grammar.
/// parse_certificate(serialize(c)) is the identity.
std::string serialize(const Certificate& cert);
Certificate parse_certificate(const std::string& bytes);

std::string verdict_report(const Verdict& v);

}  // namespace avgord
