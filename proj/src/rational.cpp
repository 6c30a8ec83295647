#include "avgord/rational.hpp"

#include <cctype>
#include <cmath>

namespace avgord {

BigRat::BigRat(const BigInt& num, const BigInt& den) : v_(num, den) {
    if (sgn(den) == 0) throw ParseError("rational with zero denominator");
    v_.canonicalize();
}

BigRat::BigRat(long num, long den) : BigRat(BigInt(num), BigInt(den)) {}

BigRat BigRat::operator/(const BigRat& o) const {
    if (o.is_zero()) throw ParseError("division by zero rational");
    return BigRat(mpq_class(v_ / o.v_));
}

BigRat BigRat::reciprocal() const {
    if (is_zero()) throw ParseError("reciprocal of zero");
    return BigRat(v_.get_den(), v_.get_num());
}

std::string BigRat::str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

BigRat BigRat::parse(const std::string& input) {
    std::string s = input;
    // strip surrounding whitespace
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw ParseError("empty rational literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string n = s.substr(0, slash), d = s.substr(slash + 1);
        bool nneg = !n.empty() && (n[0] == '-' || n[0] == '+');
        if (!all_digits(nneg ? n.substr(1) : n) || !all_digits(d))
            throw ParseError("malformed rational literal: " + input);
        return BigRat(BigInt(n), BigInt(d));
    }

    // decimal literal with optional fraction and exponent
    std::string body = s;
    long exp10 = 0;
    auto epos = body.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string es = body.substr(epos + 1);
        body = body.substr(0, epos);
        bool eneg = !es.empty() && (es[0] == '-' || es[0] == '+');
        if (!all_digits(eneg ? es.substr(1) : es))
            throw ParseError("malformed exponent: " + input);
        exp10 = std::stol(es);
    }
    bool neg = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        neg = body[0] == '-';
        body.erase(body.begin());
    }
    std::string digits;
    long frac_len = 0;
    auto dot = body.find('.');
    if (dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw ParseError("malformed decimal: " + input);
        if (!ip.empty() && !all_digits(ip)) throw ParseError("malformed decimal: " + input);
        if (!fp.empty() && !all_digits(fp)) throw ParseError("malformed decimal: " + input);
        digits = ip + fp;
        frac_len = static_cast<long>(fp.size());
    } else {
        if (!all_digits(body)) throw ParseError("malformed number: " + input);
        digits = body;
    }
    if (digits.empty()) throw ParseError("malformed number: " + input);

    BigInt num(digits, 10);
    if (neg) num = -num;
    BigInt den(1);
    long net = exp10 - frac_len;
    BigInt ten(10);
    if (net >= 0) {
        BigInt scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(net));
        num *= scale;
    } else {
        mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-net));
    }
    return BigRat(num, den);
}

double to_double(const BigRat& q) {
    double d = q.raw().get_d();
    if (!std::isfinite(d)) throw OverflowError("rational exceeds double range: ~10^" +
                                               std::to_string(mpz_sizeinbase(q.num().get_mpz_t(), 10)));
    return d;
}

namespace {

// product over [lo, hi) without intermediate reduction
void rawprod(const std::vector<BigRat>& t, std::size_t lo, std::size_t hi, BigInt& num, BigInt& den) {
    if (hi - lo == 1) {
        num = t[lo].num();
        den = t[lo].den();
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    BigInt n1, d1, n2, d2;
    rawprod(t, lo, mid, n1, d1);
    rawprod(t, mid, hi, n2, d2);
    num = n1 * n2;
    den = d1 * d2;
}

}  // namespace

BigRat product(const std::vector<BigRat>& terms) {
    if (terms.empty()) return BigRat(1);
    BigInt num, den;
    rawprod(terms, 0, terms.size(), num, den);
    return BigRat(num, den);
}

}  // namespace avgord
