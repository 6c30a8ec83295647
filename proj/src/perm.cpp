#include "avgord/perm.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "avgord/errors.hpp"

namespace avgord {

Permutation::Permutation(std::vector<std::uint32_t> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (std::uint32_t v : img_) {
        if (v >= img_.size() || seen[v]) throw ParseError("image array is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::uint32_t degree) {
    std::vector<std::uint32_t> img(degree);
    std::iota(img.begin(), img.end(), 0u);
    return Permutation(std::move(img));
}

Permutation Permutation::parse_cycles(const std::string& text, std::uint32_t min_degree) {
    std::vector<std::vector<std::uint32_t>> cycles;
    std::uint32_t max_pt = min_degree;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != '(') throw ParseError("expected '(' in cycle notation: " + text);
        ++i;
        std::vector<std::uint32_t> cyc;
        while (true) {
            skip_ws();
            if (i < text.size() && text[i] == ')') { ++i; break; }
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == i) throw ParseError("expected point number in cycle notation: " + text);
            unsigned long pt = std::stoul(text.substr(i, j - i));
            if (pt == 0) throw ParseError("points are 1-based in cycle notation");
            cyc.push_back(static_cast<std::uint32_t>(pt));
            max_pt = std::max<std::uint32_t>(max_pt, static_cast<std::uint32_t>(pt));
            i = j;
            skip_ws();
            if (i < text.size() && text[i] == ',') ++i;
        }
        cycles.push_back(std::move(cyc));
        skip_ws();
    }
    std::vector<std::uint32_t> img(max_pt);
    std::iota(img.begin(), img.end(), 0u);
    for (const auto& cyc : cycles) {
        std::set<std::uint32_t> uniq(cyc.begin(), cyc.end());
        if (uniq.size() != cyc.size()) throw ParseError("repeated point in cycle: " + text);
        for (std::size_t k = 0; k < cyc.size(); ++k)
            img[cyc[k] - 1] = cyc[(k + 1) % cyc.size()] - 1;
    }
    return Permutation(std::move(img));
}

Permutation Permutation::padded(std::uint32_t degree) const {
    if (degree <= img_.size()) return *this;
    std::vector<std::uint32_t> img = img_;
    for (std::uint32_t k = static_cast<std::uint32_t>(img_.size()); k < degree; ++k) img.push_back(k);
    return Permutation(std::move(img));
}

Permutation Permutation::operator*(const Permutation& o) const {
    if (degree() != o.degree()) throw ParseError("composing permutations of different degree");
    std::vector<std::uint32_t> img(degree());
    for (std::uint32_t i = 0; i < degree(); ++i) img[i] = img_[o.img_[i]];
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> img(degree());
    for (std::uint32_t i = 0; i < degree(); ++i) img[img_[i]] = i;
    return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
    for (std::uint32_t i = 0; i < degree(); ++i)
        if (img_[i] != i) return false;
    return true;
}

BigInt Permutation::order() const {
    BigInt ord = 1;
    std::vector<bool> seen(degree(), false);
    for (std::uint32_t i = 0; i < degree(); ++i) {
        if (seen[i]) continue;
        std::uint32_t len = 0, j = i;
        do {
            seen[j] = true;
            j = img_[j];
            ++len;
        } while (j != i);
        BigInt l(len);
        mpz_lcm(ord.get_mpz_t(), ord.get_mpz_t(), l.get_mpz_t());
    }
    return ord;
}

std::string Permutation::cycle_str() const {
    std::ostringstream out;
    std::vector<bool> seen(degree(), false);
    bool any = false;
    for (std::uint32_t i = 0; i < degree(); ++i) {
        if (seen[i] || img_[i] == i) { seen[i] = true; continue; }
        out << '(';
        std::uint32_t j = i;
        bool first = true;
        do {
            seen[j] = true;
            if (!first) out << ' ';
            out << (j + 1);
            first = false;
            j = img_[j];
        } while (j != i);
        out << ')';
        any = true;
    }
    return any ? out.str() : "()";
}

PermGroup::PermGroup(std::vector<Permutation> gens) {
    for (const auto& g : gens) degree = std::max(degree, g.degree());
    for (auto& g : gens) generators.push_back(g.padded(degree));
    if (generators.empty()) {
        degree = 1;
        generators.push_back(Permutation::identity(1));
    }
}

PermGroup parse_perm_group(const std::string& text) {
    std::vector<Permutation> gens;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = std::all_of(line.begin(), line.end(),
                                 [](unsigned char c) { return std::isspace(c); });
        if (blank) continue;
        gens.push_back(Permutation::parse_cycles(line));
    }
    if (gens.empty()) throw ParseError("generator file contains no permutations");
    return PermGroup(std::move(gens));
}

PermGroup load_perm_group(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open generator file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_perm_group(buf.str());
}

std::vector<Permutation> enumerate(const PermGroup& g, std::size_t cap) {
    std::set<Permutation> elems;
    std::vector<Permutation> frontier;
    Permutation id = Permutation::identity(g.degree);
    elems.insert(id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& e : frontier)
            for (const auto& gen : g.generators) {
                Permutation p = e * gen;
                if (elems.insert(p).second) {
                    if (elems.size() > cap)
                        throw ResourceError("enumeration cap " + std::to_string(cap) +
                                            " exceeded; partial count " + std::to_string(elems.size()));
                    next.push_back(std::move(p));
                }
            }
        frontier = std::move(next);
    }
    return std::vector<Permutation>(elems.begin(), elems.end());
}

OrderDistribution order_distribution_bruteforce(const PermGroup& g, std::size_t cap) {
    auto elems = enumerate(g, cap);
    OrderDistribution dist;
    dist.total = BigInt(static_cast<unsigned long>(elems.size()));
    for (const auto& e : elems) dist.entries[e.order()] += 1;
    return dist;
}

std::vector<Permutation> center(const PermGroup& g, std::size_t cap) {
    auto elems = enumerate(g, cap);
    std::vector<Permutation> z;
    for (const auto& e : elems) {
        bool commutes = true;
        for (const auto& gen : g.generators)
            if (!(e * gen == gen * e)) { commutes = false; break; }
        if (commutes) z.push_back(e);
    }
    return z;
}

namespace {

using Mask = std::uint64_t;

// closure of `mask` under the multiplication table
Mask close_mask(Mask mask, const std::vector<std::vector<std::uint8_t>>& mul, std::size_t n) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t a = 0; a < n; ++a) {
            if (!(mask >> a & 1)) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (!(mask >> b & 1)) continue;
                Mask bit = Mask(1) << mul[a][b];
                if (!(mask & bit)) { mask |= bit; changed = true; }
            }
        }
    }
    return mask;
}

}  // namespace

std::vector<std::vector<Permutation>> subgroup_lattice(const PermGroup& g, std::size_t order_cap) {
    if (order_cap > 64) throw ResourceError("subgroup lattice cap limited to order 64");
    auto elems = enumerate(g, order_cap);  // throws if |G| > order_cap
    const std::size_t n = elems.size();

    std::map<Permutation, std::uint8_t> index;
    for (std::size_t i = 0; i < n; ++i) index[elems[i]] = static_cast<std::uint8_t>(i);
    std::vector<std::vector<std::uint8_t>> mul(n, std::vector<std::uint8_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) mul[a][b] = index.at(elems[a] * elems[b]);

    std::set<Mask> subs;
    std::vector<Mask> worklist;
    // cyclic subgroups seed the closure
    std::size_t id_idx = index.at(Permutation::identity(g.degree));
    for (std::size_t a = 0; a < n; ++a) {
        Mask m = (Mask(1) << id_idx) | (Mask(1) << a);
        m = close_mask(m, mul, n);
        if (subs.insert(m).second) worklist.push_back(m);
    }
    // pairwise joins until fixpoint
    while (!worklist.empty()) {
        Mask m = worklist.back();
        worklist.pop_back();
        std::vector<Mask> snapshot(subs.begin(), subs.end());
        for (Mask other : snapshot) {
            Mask join = m | other;
            if (join == m || join == other) continue;
            join = close_mask(join, mul, n);
            if (subs.insert(join).second) worklist.push_back(join);
        }
    }

    std::vector<std::vector<Permutation>> out;
    for (Mask m : subs) {
        std::vector<Permutation> members;
        for (std::size_t a = 0; a < n; ++a)
            if (m >> a & 1) members.push_back(elems[a]);
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool nilpotency_check(const PermGroup& g, std::size_t cap) {
    auto elems = enumerate(g, cap);
    BigInt order(static_cast<unsigned long>(elems.size()));

    std::vector<BigInt> primes;
    BigInt rest = order, p = 2;
    while (rest > 1) {
        if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
            primes.push_back(p);
            while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) rest /= p;
        }
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }

    for (const BigInt& q : primes) {
        std::vector<const Permutation*> pelems;
        std::set<Permutation> pset;
        for (const auto& e : elems) {
            BigInt ord = e.order();
            // q-power order: ord is 1 or a power of q
            BigInt t = ord;
            while (t > 1 && mpz_divisible_p(t.get_mpz_t(), q.get_mpz_t())) t /= q;
            if (t == 1) {
                pelems.push_back(&e);
                pset.insert(e);
            }
        }
        for (const auto* a : pelems)
            for (const auto* b : pelems)
                if (!pset.count(*a * *b)) return false;
    }
    return true;
}

}  // namespace avgord
