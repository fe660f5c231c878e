#pragma once

/**
 * @file qsqrt3.hpp
 * @brief Exact arithmetic in the field Q(sqrt 3).
 */

#include <ostream>
#include <stdexcept>
#include <string>

#include "tbp/geometry.hpp"
#include "tbp/rational.hpp"

namespace tbp {

/// a + b*sqrt(3) with exact rational parts.
class QSqrt3 {
public:
    QSqrt3() = default;
    QSqrt3(const Rational& a) : a_(a) {}  // NOLINT: embedding of Q
    QSqrt3(long a) : a_(a) {}             // NOLINT
    QSqrt3(const Rational& a, const Rational& b) : a_(a), b_(b) {}

    static QSqrt3 sqrt3() { return {Rational(0), Rational(1)}; }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    bool is_rational() const { return b_ == 0; }

    /// Exact sign: -1, 0 or 1.
    int sign() const {
        const int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0 || sa == sb) return sb;
        // opposite signs: compare a^2 with 3 b^2
        const Rational lhs = a_ * a_, rhs = 3 * b_ * b_;
        if (lhs == rhs) return 0;  // cannot happen for rational a, b unless both 0
        return lhs > rhs ? sa : sb;
    }

    QSqrt3 conjugate() const { return {a_, Rational(-b_)}; }
    Rational norm() const { return a_ * a_ - 3 * b_ * b_; }

    double to_double() const { return a_.get_d() + b_.get_d() * 1.7320508075688772; }

    friend QSqrt3 operator+(const QSqrt3& x, const QSqrt3& y) { return {Rational(x.a_ + y.a_), Rational(x.b_ + y.b_)}; }
    friend QSqrt3 operator-(const QSqrt3& x, const QSqrt3& y) { return {Rational(x.a_ - y.a_), Rational(x.b_ - y.b_)}; }
    friend QSqrt3 operator*(const QSqrt3& x, const QSqrt3& y) {
        if (x.b_ == 0 && y.b_ == 0) return QSqrt3(Rational(x.a_ * y.a_));
        return {Rational(x.a_ * y.a_ + 3 * x.b_ * y.b_), Rational(x.a_ * y.b_ + x.b_ * y.a_)};
    }
    friend QSqrt3 operator/(const QSqrt3& x, const QSqrt3& y) {
        if (y.b_ == 0) {
            if (y.a_ == 0) throw std::domain_error("QSqrt3: division by zero");
            return {Rational(x.a_ / y.a_), Rational(x.b_ / y.a_)};
        }
        const Rational n = y.norm();
        const QSqrt3 p = x * y.conjugate();
        return {Rational(p.a_ / n), Rational(p.b_ / n)};
    }
    QSqrt3 operator-() const { return {Rational(-a_), Rational(-b_)}; }
    QSqrt3& operator+=(const QSqrt3& o) { return *this = *this + o; }
    QSqrt3& operator-=(const QSqrt3& o) { return *this = *this - o; }
    QSqrt3& operator*=(const QSqrt3& o) { return *this = *this * o; }

    friend bool operator==(const QSqrt3& x, const QSqrt3& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator<(const QSqrt3& x, const QSqrt3& y) { return (x - y).sign() < 0; }
    friend bool operator>(const QSqrt3& x, const QSqrt3& y) { return y < x; }
    friend bool operator<=(const QSqrt3& x, const QSqrt3& y) { return !(y < x); }
    friend bool operator>=(const QSqrt3& x, const QSqrt3& y) { return !(x < y); }

    std::string to_string() const {
        if (b_ == 0) return a_.get_str();
        return a_.get_str() + (b_ < 0 ? " - " : " + ") + Rational(b_ < 0 ? Rational(-b_) : b_).get_str() + "*sqrt3";
    }
    friend std::ostream& operator<<(std::ostream& os, const QSqrt3& x) { return os << x.to_string(); }

private:
    static int sgn(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }
    Rational a_{0};
    Rational b_{0};
};

inline QSqrt3 qabs(const QSqrt3& x) { return x.sign() < 0 ? -x : x; }

inline QSqrt3 qpow(const QSqrt3& x, int n) {
    QSqrt3 r(1), base = x;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

template <>
struct NumTraits<QSqrt3> {
    static QSqrt3 dyadic(std::int64_t v, int e) { return QSqrt3(NumTraits<Rational>::dyadic(v, e)); }
    static QSqrt3 maximum(const QSqrt3& a, const QSqrt3& b) { return a < b ? b : a; }
};

}  // namespace tbp
