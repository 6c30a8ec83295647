#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "avgord/errors.hpp"

namespace avgord {

using BigInt = mpz_class;

/// Exact rational, always in lowest terms with positive denominator.
/// Every ratio, target and tolerance in this project is a BigRat; floating
/// point appears only in diagnostics (to_double).
class BigRat {
public:
    BigRat() : v_(0) {}
    BigRat(long n) : v_(n) {}
    BigRat(const BigInt& n) : v_(n) {}
    BigRat(const BigInt& num, const BigInt& den);
    BigRat(long num, long den);

    const BigInt num() const { return v_.get_num(); }
    const BigInt den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    BigRat operator+(const BigRat& o) const { return BigRat(mpq_class(v_ + o.v_)); }
    BigRat operator-(const BigRat& o) const { return BigRat(mpq_class(v_ - o.v_)); }
    BigRat operator*(const BigRat& o) const { return BigRat(mpq_class(v_ * o.v_)); }
    BigRat operator/(const BigRat& o) const;
    BigRat operator-() const { return BigRat(mpq_class(-v_)); }

    bool operator==(const BigRat& o) const { return v_ == o.v_; }
    bool operator!=(const BigRat& o) const { return v_ != o.v_; }
    bool operator<(const BigRat& o) const { return v_ < o.v_; }
    bool operator<=(const BigRat& o) const { return v_ <= o.v_; }
    bool operator>(const BigRat& o) const { return v_ > o.v_; }
    bool operator>=(const BigRat& o) const { return v_ >= o.v_; }

    BigRat abs() const { return BigRat(mpq_class(::abs(v_))); }
    BigRat reciprocal() const;

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }

    /// Canonical serialization: always "num/den" (e.g. "19/22", "10/1").
    std::string str() const;

    /// Accepts "num/den", a bare integer, or a decimal literal with optional
    /// exponent ("0.37" -> 37/100, "1e-4" -> 1/10000). Always exact.
    static BigRat parse(const std::string& s);

    static BigRat from_mpq(const mpq_class& q) { return BigRat(mpq_class(q)); }

private:
    explicit BigRat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }
    mpq_class v_;
};

/// Nearest double; diagnostic only, never used on the certification path.
/// Throws OverflowError when the value leaves the finite double range.
double to_double(const BigRat& q);

/// Balanced product of a list of rationals, reduced once at the end.
/// Exact; avoids the quadratic cost of repeated canonicalization.
BigRat product(const std::vector<BigRat>& terms);

}  // namespace avgord
