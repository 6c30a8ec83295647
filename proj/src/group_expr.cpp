#include "avgord/group_expr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "avgord/errors.hpp"
#include "avgord/perm.hpp"

namespace avgord {

void AbelianDescriptor::add(const BigInt& p, unsigned e) {
    if (e == 0) throw ParseError("abelian factor exponent must be >= 1");
    factors.emplace_back(p, e);
    normalize();
}

void AbelianDescriptor::normalize() { std::sort(factors.begin(), factors.end()); }

BigInt AbelianDescriptor::order() const {
    BigInt n = 1;
    for (const auto& [p, e] : factors) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        n *= pe;
    }
    return n;
}

std::set<BigInt> AbelianDescriptor::primes() const {
    std::set<BigInt> out;
    for (const auto& [p, e] : factors) out.insert(p);
    return out;
}

GroupExpr GroupExpr::trivial() { return GroupExpr{}; }

GroupExpr GroupExpr::from_abelian(AbelianDescriptor d) {
    GroupExpr e;
    e.kind = Kind::Abelian;
    d.normalize();
    e.abelian = std::move(d);
    return e;
}

GroupExpr GroupExpr::named(std::string key) {
    GroupExpr e;
    e.kind = Kind::Named;
    e.name = std::move(key);
    return e;
}

GroupExpr GroupExpr::product(std::vector<GroupExpr> parts) {
    if (parts.empty()) return trivial();
    if (parts.size() == 1) return parts.front();
    GroupExpr e;
    e.kind = Kind::Product;
    e.children = std::move(parts);
    return e;
}

GroupExpr GroupExpr::perm(std::string path) {
    GroupExpr e;
    e.kind = Kind::Perm;
    e.perm_path = std::move(path);
    return e;
}

namespace {

// n = p^e with p prime, n >= 2; throws otherwise.
std::pair<BigInt, unsigned> prime_power_decompose(const BigInt& n, const std::string& ctx) {
    if (n < 2) throw ParseError("cyclic order must be a prime power >= 2: " + ctx);
    if (mpz_probab_prime_p(n.get_mpz_t(), 32) != 0) return {n, 1};
    // composite: n must be p^e, so its e-th root is prime for the right e
    for (unsigned e = 2; e <= mpz_sizeinbase(n.get_mpz_t(), 2); ++e) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
            if (mpz_probab_prime_p(root.get_mpz_t(), 32) != 0) return {root, e};
        }
    }
    throw ParseError("not a prime power: " + ctx);
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream in(text);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

GroupExpr parse_term(const std::string& tok) {
    if (tok.rfind("perm:", 0) == 0) {
        std::string path = tok.substr(5);
        if (path.empty()) throw ParseError("perm: requires a path");
        return GroupExpr::perm(path);
    }
    if (tok.rfind("C(", 0) == 0) {
        auto close = tok.find(')');
        if (close == std::string::npos) throw ParseError("unterminated C(: " + tok);
        std::string num = tok.substr(2, close - 2);
        unsigned long power = 1;
        std::string rest = tok.substr(close + 1);
        if (!rest.empty()) {
            if (rest[0] != '^') throw ParseError("unexpected suffix after C(n): " + tok);
            power = std::stoul(rest.substr(1));
            if (power == 0) throw ParseError("power must be >= 1: " + tok);
        }
        BigInt n;
        try {
            n = BigInt(num);
        } catch (const std::exception&) {
            throw ParseError("malformed cyclic order: " + tok);
        }
        auto [p, e] = prime_power_decompose(n, tok);
        AbelianDescriptor d;
        for (unsigned long k = 0; k < power; ++k) d.factors.emplace_back(p, e);
        d.normalize();
        return GroupExpr::from_abelian(std::move(d));
    }
    if (find_named(tok)) return GroupExpr::named(tok);
    throw ParseError("unknown group term: " + tok);
}

}  // namespace

GroupExpr parse_group_expr(const std::string& text) {
    auto toks = tokenize(text);
    if (toks.empty()) return GroupExpr::trivial();
    std::vector<GroupExpr> parts;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i % 2 == 1) {
            if (toks[i] != "x") throw ParseError("expected 'x' between group terms, got: " + toks[i]);
            continue;
        }
        GroupExpr term = parse_term(toks[i]);
        // adjacent cyclic terms fuse into one descriptor, so "C(2) x C(2)"
        // and "C(2)^2" parse to the same structure
        if (term.kind == GroupExpr::Kind::Abelian && !parts.empty() &&
            parts.back().kind == GroupExpr::Kind::Abelian) {
            auto& dst = parts.back().abelian.factors;
            dst.insert(dst.end(), term.abelian.factors.begin(), term.abelian.factors.end());
        } else {
            parts.push_back(std::move(term));
        }
    }
    if (toks.size() % 2 == 0) throw ParseError("dangling 'x' in group expression");
    for (GroupExpr& part : parts)
        if (part.kind == GroupExpr::Kind::Abelian) part.abelian.normalize();
    return GroupExpr::product(std::move(parts));
}

namespace {

std::string abelian_str(const AbelianDescriptor& d) {
    // group equal prime powers into C(v)^k
    std::ostringstream out;
    bool first = true;
    std::size_t i = 0;
    while (i < d.factors.size()) {
        std::size_t j = i;
        while (j < d.factors.size() && d.factors[j] == d.factors[i]) ++j;
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), d.factors[i].first.get_mpz_t(), d.factors[i].second);
        if (!first) out << " x ";
        out << "C(" << pe.get_str() << ")";
        if (j - i > 1) out << "^" << (j - i);
        first = false;
        i = j;
    }
    return out.str();
}

}  // namespace

std::string group_expr_str(const GroupExpr& expr) {
    switch (expr.kind) {
        case GroupExpr::Kind::Abelian:
            return abelian_str(expr.abelian);
        case GroupExpr::Kind::Named:
            return expr.name;
        case GroupExpr::Kind::Perm:
            return "perm:" + expr.perm_path;
        case GroupExpr::Kind::Product: {
            std::string out;
            for (std::size_t i = 0; i < expr.children.size(); ++i) {
                if (i) out += " x ";
                out += group_expr_str(expr.children[i]);
            }
            return out;
        }
    }
    return "";
}

OrderDistribution abelian_order_distribution(const AbelianDescriptor& desc) {
    // exponent lists per prime
    std::map<BigInt, std::vector<unsigned>> per_prime;
    for (const auto& [p, e] : desc.factors) per_prime[p].push_back(e);

    OrderDistribution acc = trivial_distribution();
    for (const auto& [p, exps] : per_prime) {
        unsigned emax = *std::max_element(exps.begin(), exps.end());
        OrderDistribution local;
        BigInt prev = 1;  // #(order divides p^0)
        BigInt pj = 1;
        local.entries[BigInt(1)] = 1;
        for (unsigned j = 1; j <= emax; ++j) {
            pj *= p;
            unsigned long esum = 0;
            for (unsigned e : exps) esum += std::min(e, j);
            BigInt fj;
            mpz_pow_ui(fj.get_mpz_t(), p.get_mpz_t(), esum);
            BigInt cnt = fj - prev;
            if (cnt > 0) local.entries[pj] = cnt;
            prev = fj;
        }
        local.total = prev;
        acc = lcm_convolve(acc, local);
    }
    return acc;
}

BigInt cyclic_psi_closed(const BigInt& p, unsigned k) {
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), 2 * k + 1);
    BigInt num = pw + 1, den = p + 1, out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

OrderDistribution resolve_distribution(const GroupExpr& expr) {
    switch (expr.kind) {
        case GroupExpr::Kind::Abelian:
            return abelian_order_distribution(expr.abelian);
        case GroupExpr::Kind::Named: {
            auto named = find_named(expr.name);
            if (!named) throw ParseError("unknown named group: " + expr.name);
            return named->dist;
        }
        case GroupExpr::Kind::Perm:
            return order_distribution_bruteforce(load_perm_group(expr.perm_path));
        case GroupExpr::Kind::Product: {
            OrderDistribution acc = trivial_distribution();
            for (const auto& c : expr.children) acc = lcm_convolve(acc, resolve_distribution(c));
            return acc;
        }
    }
    return trivial_distribution();
}

BigInt group_order(const GroupExpr& expr) {
    switch (expr.kind) {
        case GroupExpr::Kind::Abelian:
            return expr.abelian.order();
        case GroupExpr::Kind::Named: {
            auto named = find_named(expr.name);
            if (!named) throw ParseError("unknown named group: " + expr.name);
            return named->dist.total;
        }
        case GroupExpr::Kind::Perm:
            return resolve_distribution(expr).total;
        case GroupExpr::Kind::Product: {
            BigInt n = 1;
            for (const auto& c : expr.children) n *= group_order(c);
            return n;
        }
    }
    return 1;
}

namespace {

std::set<BigInt> factor_primes(const BigInt& n) {
    std::set<BigInt> out;
    BigInt rest = n, p = 2;
    while (rest > 1) {
        if (mpz_probab_prime_p(rest.get_mpz_t(), 32) != 0) {
            out.insert(rest);
            break;
        }
        while (!mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t()))
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        out.insert(p);
        while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) rest /= p;
    }
    return out;
}

}  // namespace

std::set<BigInt> prime_support(const GroupExpr& expr) {
    switch (expr.kind) {
        case GroupExpr::Kind::Abelian:
            return expr.abelian.primes();
        case GroupExpr::Kind::Named:
        case GroupExpr::Kind::Perm:
            return factor_primes(group_order(expr));
        case GroupExpr::Kind::Product: {
            std::set<BigInt> out;
            for (const auto& c : expr.children) {
                auto s = prime_support(c);
                out.insert(s.begin(), s.end());
            }
            return out;
        }
    }
    return {};
}

bool pairwise_coprime(const std::vector<GroupExpr>& parts) {
    std::set<BigInt> seen;
    for (const auto& part : parts)
        for (const BigInt& p : prime_support(part))
            if (!seen.insert(p).second) return false;
    return true;
}

BigRat avg_order(const GroupExpr& expr) {
    if (expr.kind == GroupExpr::Kind::Product) {
        if (pairwise_coprime(expr.children)) {
            std::vector<BigRat> vals;
            vals.reserve(expr.children.size());
            for (const auto& c : expr.children) vals.push_back(avg_order(c));
            return product(vals);
        }
        return avg_order(resolve_distribution(expr));
    }
    if (expr.kind == GroupExpr::Kind::Abelian) {
        // the primary Sylow components commute coprimely; evaluate per prime
        // so descriptors over many primes never materialize a joint histogram
        std::map<BigInt, AbelianDescriptor> per_prime;
        for (const auto& [p, e] : expr.abelian.factors) per_prime[p].add(p, e);
        std::vector<BigRat> vals;
        vals.reserve(per_prime.size());
        for (const auto& [p, d] : per_prime)
            vals.push_back(avg_order(abelian_order_distribution(d)));
        return product(vals);
    }
    return avg_order(resolve_distribution(expr));
}

BigInt psi(const GroupExpr& expr) {
    if (expr.kind == GroupExpr::Kind::Product && pairwise_coprime(expr.children)) {
        BigInt out = 1;
        for (const auto& c : expr.children) out *= psi(c);
        return out;
    }
    if (expr.kind == GroupExpr::Kind::Abelian) {
        std::map<BigInt, AbelianDescriptor> per_prime;
        for (const auto& [p, e] : expr.abelian.factors) per_prime[p].add(p, e);
        BigInt out = 1;
        for (const auto& [p, d] : per_prime) out *= psi(abelian_order_distribution(d));
        return out;
    }
    return psi(resolve_distribution(expr));
}

BigRat o_ratio(const GroupExpr& g, const GroupExpr& h) { return avg_order(g) / avg_order(h); }

// ---- Registry ---------------------------------------------------------------

namespace {

OrderDistribution cyclic_distribution(const BigInt& p, unsigned e) {
    AbelianDescriptor d;
    d.factors.emplace_back(p, e);
    return abelian_order_distribution(d);
}

// dihedral group of order 2^{k+1}: rotations C_{2^k} plus 2^k reflections
OrderDistribution dih_two_distribution(unsigned k) {
    OrderDistribution d = cyclic_distribution(2, k);
    BigInt half = d.total;
    d.entries[BigInt(2)] += half;
    d.total = 2 * half;
    return d;
}

std::optional<unsigned> parse_dih_two(const std::string& key) {
    if (key.rfind("DihTwo(", 0) != 0 || key.back() != ')') return std::nullopt;
    std::string inner = key.substr(7, key.size() - 8);
    if (inner.empty() || inner.size() > 2 ||
        !std::all_of(inner.begin(), inner.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    unsigned k = static_cast<unsigned>(std::stoul(inner));
    if (k < 2 || k > 30) return std::nullopt;
    return k;
}

}  // namespace

std::optional<NamedGroup> find_named(const std::string& key) {
    if (key == "C4") return NamedGroup{key, cyclic_distribution(2, 2), true, BigInt(4)};
    if (key == "D4") return NamedGroup{key, dih_two_distribution(2), true, BigInt(4)};
    if (key == "Q8") {
        OrderDistribution d;
        d.entries[BigInt(1)] = 1;
        d.entries[BigInt(2)] = 1;
        d.entries[BigInt(4)] = 6;
        d.total = 8;
        return NamedGroup{key, d, true, BigInt(4)};
    }
    if (auto k = parse_dih_two(key)) {
        BigInt w;
        mpz_pow_ui(w.get_mpz_t(), BigInt(2).get_mpz_t(), *k);
        return NamedGroup{key, dih_two_distribution(*k), true, w};
    }
    return std::nullopt;
}

namespace {

// quaternion multiplication on {1,-1,i,-i,j,-j,k,-k}, encoded (basis, sign)
int q8_mul(int a, int b) {
    // basis: 0=1, 1=i, 2=j, 3=k; element = basis*2 + (sign<0)
    static const int basis_tab[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign_tab[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    int ba = a / 2, bb = b / 2;
    int sa = a % 2 ? -1 : 1, sb = b % 2 ? -1 : 1;
    int basis = basis_tab[ba][bb];
    int sign = sa * sb * sign_tab[ba][bb];
    return basis * 2 + (sign < 0 ? 1 : 0);
}

Permutation q8_left_mul(int g) {
    std::vector<std::uint32_t> img(8);
    for (int x = 0; x < 8; ++x) img[x] = static_cast<std::uint32_t>(q8_mul(g, x));
    return Permutation(std::move(img));
}

std::vector<Permutation> dihedral_generators(unsigned k) {
    const std::uint32_t n = 1u << k;  // polygon size
    std::vector<std::uint32_t> rot(n), refl(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        rot[i] = (i + 1) % n;
        refl[i] = (n - i) % n;
    }
    return {Permutation(std::move(rot)), Permutation(std::move(refl))};
}

}  // namespace

std::vector<Permutation> named_generators(const std::string& key) {
    if (key == "C4") return {Permutation::parse_cycles("(1 2 3 4)")};
    if (key == "Q8") return {q8_left_mul(2 /* i */), q8_left_mul(4 /* j */)};
    if (key == "D4") return dihedral_generators(2);
    if (auto k = parse_dih_two(key)) {
        if (*k > 20) throw ResourceError("no permutation realization for " + key + " under cap");
        return dihedral_generators(*k);
    }
    throw ParseError("unknown named group: " + key);
}

// ---- Subgroup witness -------------------------------------------------------

namespace {

void flatten(const GroupExpr& e, std::vector<const GroupExpr*>& out) {
    if (e.kind == GroupExpr::Kind::Product)
        for (const auto& c : e.children) flatten(c, out);
    else if (!(e.kind == GroupExpr::Kind::Abelian && e.abelian.trivial()))
        out.push_back(&e);
}

// cyclic order of a factor when it is a single cyclic group, else nullopt
std::optional<BigInt> cyclic_order(const GroupExpr& e) {
    if (e.kind == GroupExpr::Kind::Abelian && e.abelian.factors.size() == 1) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), e.abelian.factors[0].first.get_mpz_t(), e.abelian.factors[0].second);
        return pe;
    }
    if (e.kind == GroupExpr::Kind::Named && e.name == "C4") return BigInt(4);
    return std::nullopt;
}

// conjugate-partition domination: an abelian p-group of type `sub` embeds in
// one of type `sup` iff for every i, #{e in sub : e >= i} <= #{e in sup : e >= i}
bool partition_dominates(const std::vector<unsigned>& sup, const std::vector<unsigned>& sub) {
    unsigned emax = 0;
    for (unsigned e : sub) emax = std::max(emax, e);
    for (unsigned i = 1; i <= emax; ++i) {
        std::size_t csub = std::count_if(sub.begin(), sub.end(), [&](unsigned e) { return e >= i; });
        std::size_t csup = std::count_if(sup.begin(), sup.end(), [&](unsigned e) { return e >= i; });
        if (csub > csup) return false;
    }
    return true;
}

bool perm_subset_check(const std::string& gpath, const std::string& hpath) {
    auto gelems = enumerate(load_perm_group(gpath));
    auto helems = enumerate(load_perm_group(hpath));
    std::set<Permutation> gset(gelems.begin(), gelems.end());
    std::uint32_t deg = gelems.front().degree();
    for (const auto& h : helems)
        if (!gset.count(h.padded(deg))) return false;
    return true;
}

}  // namespace

bool subgroup_witness(const GroupExpr& g, const GroupExpr& h) {
    std::vector<const GroupExpr*> gf, hf;
    flatten(g, gf);
    flatten(h, hf);

    // abelian exponents per prime, plus the nonabelian base factors of g
    std::map<BigInt, std::vector<unsigned>> gexp, hexp;
    std::vector<const GroupExpr*> gbases;
    for (const GroupExpr* part : gf) {
        if (part->kind == GroupExpr::Kind::Abelian)
            for (const auto& [p, e] : part->abelian.factors) gexp[p].push_back(e);
        else
            gbases.push_back(part);
    }

    // nonabelian h factors must match a base of g outright; cyclic named
    // factors fold into the abelian side
    for (const GroupExpr* part : hf) {
        if (part->kind == GroupExpr::Kind::Abelian) {
            for (const auto& [p, e] : part->abelian.factors) hexp[p].push_back(e);
            continue;
        }
        auto corder = cyclic_order(*part);
        if (corder && *corder > 1) {
            AbelianDescriptor d;
            auto [p, e] = prime_power_decompose(*corder, "cyclic named factor");
            hexp[p].push_back(e);
            continue;
        }
        bool matched = false;
        for (auto it = gbases.begin(); it != gbases.end(); ++it) {
            const GroupExpr& base = **it;
            if (part->kind == GroupExpr::Kind::Named &&
                base.kind == GroupExpr::Kind::Named && base.name == part->name) {
                matched = true;
            } else if (part->kind == GroupExpr::Kind::Perm &&
                       base.kind == GroupExpr::Kind::Perm &&
                       perm_subset_check(base.perm_path, part->perm_path)) {
                matched = true;
            }
            if (matched) {
                gbases.erase(it);
                break;
            }
        }
        if (!matched) return false;
    }

    // each unmatched base offers one cyclic slot of its attested witness order
    std::map<BigInt, std::vector<unsigned>> slots;
    for (const GroupExpr* base : gbases) {
        if (base->kind != GroupExpr::Kind::Named) continue;
        auto named = find_named(base->name);
        if (!named || named->cyclic_witness_order <= 1) continue;
        auto [p, e] = prime_power_decompose(named->cyclic_witness_order, "witness order");
        slots[p].push_back(e);
    }

    for (const auto& [p, exps] : hexp) {
        std::vector<unsigned> need = exps;
        std::sort(need.begin(), need.end(), std::greater<unsigned>());
        auto sit = slots.find(p);
        if (sit != slots.end()) {
            std::vector<unsigned> caps = sit->second;
            std::sort(caps.begin(), caps.end(), std::greater<unsigned>());
            // fill the largest slot with the largest part that fits
            for (unsigned cap : caps) {
                for (auto it = need.begin(); it != need.end(); ++it)
                    if (*it <= cap) {
                        need.erase(it);
                        break;
                    }
            }
        }
        if (need.empty()) continue;
        auto it = gexp.find(p);
        if (it == gexp.end()) return false;
        if (!partition_dominates(it->second, need)) return false;
    }
    return true;
}

}  // namespace avgord
