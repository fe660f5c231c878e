#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals (GMP-backed) and exact rational intervals.
 */

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tbp/interval.hpp"

namespace tbp {

/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "p/q" or "-p/q".
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline Rational rpow(const Rational& x, int n) {
    if (n < 0) return rpow(Rational(1) / x, -n);
    Rational r(1);
    mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(n));
    r.canonicalize();
    return r;
}

inline Rational pow2(int e) {
    Rational r(1);
    if (e >= 0)
        mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(e));
    else
        mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(-e));
    return r;
}

inline Rational rabs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline BigInt factorial(unsigned n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// Tightest machine interval around an exact rational (exact doubles stay degenerate).
inline MachineInterval enclose(const Rational& q) {
    const double d = q.get_d();  // truncates toward zero
    if (Rational(d) == q) return MachineInterval(d);
    return MachineInterval(step_down(d), step_up(d));
}

/// Closed interval [lo, hi] with exact rational endpoints. All operations are exact.
class RationalInterval {
public:
    RationalInterval() = default;
    RationalInterval(const Rational& v) : lo_(v), hi_(v) {}  // NOLINT: implicit point interval
    RationalInterval(long v) : lo_(v), hi_(v) {}              // NOLINT
    RationalInterval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
        if (lo_ > hi_) throw std::invalid_argument("RationalInterval: lo > hi");
    }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    bool is_point() const { return lo_ == hi_; }
    bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
    bool contains(const RationalInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

    friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
        return {a.lo_ + b.lo_, a.hi_ + b.hi_};
    }
    friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
        return {a.lo_ - b.hi_, a.hi_ - b.lo_};
    }
    friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
        if (a.is_point() && b.is_point()) return RationalInterval(Rational(a.lo_ * b.lo_));
        Rational p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
        return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
    }
    RationalInterval operator-() const { return {Rational(-hi_), Rational(-lo_)}; }

    RationalInterval& operator+=(const RationalInterval& o) { return *this = *this + o; }
    RationalInterval& operator-=(const RationalInterval& o) { return *this = *this - o; }
    RationalInterval& operator*=(const RationalInterval& o) { return *this = *this * o; }

    friend bool operator==(const RationalInterval& a, const RationalInterval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    friend std::ostream& operator<<(std::ostream& os, const RationalInterval& x) {
        return os << '[' << x.lo_ << ", " << x.hi_ << ']';
    }

private:
    Rational lo_{0};
    Rational hi_{0};
};

/// I^n as I x ... x I (n factors); I^0 = [1,1]. Dependency-blind on purpose.
inline RationalInterval ipow(const RationalInterval& x, int n) {
    RationalInterval r(Rational(1));
    for (int i = 0; i < n; ++i) r = r * x;
    return r;
}

inline RationalInterval max(const RationalInterval& a, const RationalInterval& b) {
    return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline RationalInterval min(const RationalInterval& a, const RationalInterval& b) {
    return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

}  // namespace tbp
