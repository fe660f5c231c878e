#pragma once

/**
 * @file power_combo.hpp
 * @brief Power combos in s and their rational under/over approximations.
 *
 * A combo is sum over m = 2,3,4 of (a_m + b_m s + c_m s^2) m^(-s/2). The quadratic
 * terms appear once a combo is multiplied by a linear factor in s; plain combos
 * have c = 0. Near an even integer 2k the exponential m^(-s/2) is replaced by an
 * interval Taylor polynomial whose coefficients trap log(m) in a rational bracket.
 */

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbp/interval_poly.hpp"
#include "tbp/rational.hpp"

namespace tbp {

struct PowerCombo {
    std::array<Rational, 3> a{};  // m = 2, 3, 4
    std::array<Rational, 3> b{};
    std::array<Rational, 3> c{};

    static PowerCombo from_row(const std::array<long, 6>& row, long den) {
        PowerCombo p;
        for (int i = 0; i < 3; ++i) {
            p.a[i] = make_rational(row[static_cast<std::size_t>(i)], den);
            p.b[i] = make_rational(row[static_cast<std::size_t>(i + 3)], den);
        }
        return p;
    }

    bool is_linear() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }

    friend PowerCombo operator+(const PowerCombo& x, const PowerCombo& y) {
        PowerCombo r;
        for (int i = 0; i < 3; ++i) {
            r.a[i] = x.a[i] + y.a[i];
            r.b[i] = x.b[i] + y.b[i];
            r.c[i] = x.c[i] + y.c[i];
        }
        return r;
    }
    friend PowerCombo operator*(const Rational& k, const PowerCombo& x) {
        PowerCombo r;
        for (int i = 0; i < 3; ++i) {
            r.a[i] = k * x.a[i];
            r.b[i] = k * x.b[i];
            r.c[i] = k * x.c[i];
        }
        return r;
    }
    friend PowerCombo operator-(const PowerCombo& x, const PowerCombo& y) { return x + Rational(-1) * y; }
    PowerCombo operator-() const { return Rational(-1) * *this; }
    friend bool operator==(const PowerCombo& x, const PowerCombo& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }

    /// (s + kappa) * combo; only defined for linear combos.
    PowerCombo times_s_plus(const Rational& kappa) const {
        if (!is_linear()) throw std::logic_error("PowerCombo: degree in s would exceed 2");
        PowerCombo r;
        for (int i = 0; i < 3; ++i) {
            r.a[i] = kappa * a[i];
            r.b[i] = a[i] + kappa * b[i];
            r.c[i] = b[i];
        }
        return r;
    }

    long double evaluate(long double s) const {
        long double v = 0;
        for (int i = 0; i < 3; ++i) {
            const long double w = std::pow(static_cast<long double>(i + 2), -s / 2);
            v += (a[i].get_d() + b[i].get_d() * s + c[i].get_d() * s * s) * w;
        }
        return v;
    }
};

/// The brackets L2, L3, L4 for log 2, log 3, log 4.
inline std::array<RationalInterval, 3> log_enclosures() {
    return {RationalInterval(make_rational(25469, 36744), make_rational(7050, 10171)),
            RationalInterval(make_rational(5225, 4756), make_rational(708784, 645163)),
            RationalInterval(make_rational(25469, 18372), make_rational(345197, 249007))};
}

/// Enclosure of exp(x) for 0 <= x <= 2: partial sum plus the geometric tail bound.
inline RationalInterval exp_enclosure(const Rational& x, int terms = 40) {
    if (x < 0 || x > 2) throw std::domain_error("exp_enclosure: x outside [0,2]");
    Rational sum(0), term(1);
    for (int j = 0; j < terms; ++j) {
        sum += term;
        term = term * x / (j + 1);
    }
    // tail <= term * sum_i (x/(terms+1))^i
    const Rational tail = term / (1 - x / (terms + 1));
    return {sum, Rational(sum + tail)};
}

/// True iff exp(lo) < m < exp(hi) is certified for each bracket.
inline bool verify_log_enclosures() {
    const auto L = log_enclosures();
    for (int i = 0; i < 3; ++i) {
        const Rational m(i + 2);
        if (!(exp_enclosure(L[i].lo()).hi() < m)) return false;
        if (!(exp_enclosure(L[i].hi()).lo() > m)) return false;
    }
    return true;
}

struct ApproxPair {
    RationalPoly under;
    RationalPoly over;
};

enum class Side { left, right };  // left: C(2k - t); right: C(2k + t)

/// Interval Taylor polynomial trapping m^(-(2k -/+ t)/2) for t in [0,1].
inline IntervalPolynomial exp_taylor(int m, int two_k, Side side) {
    if (two_k % 2 != 0) throw std::invalid_argument("exp_taylor: expansion point must be even");
    const auto L = log_enclosures()[static_cast<std::size_t>(m - 2)];
    const int k = two_k / 2;
    const Rational base = k >= 0 ? Rational(1) / rpow(Rational(m), k) : rpow(Rational(m), -k);  // m^-k
    std::vector<RationalInterval> c;
    RationalInterval lp(Rational(1));
    for (int j = 0; j <= 11; ++j) {
        const Rational scale = base / (pow2(j) * Rational(factorial(static_cast<unsigned>(j))));
        RationalInterval coeff = lp * RationalInterval(scale);
        if (side == Side::right && j % 2 == 1) coeff = -coeff;
        c.push_back(coeff);
        lp = lp * L;
    }
    const Rational r = Rational(1) / Rational(factorial(12));
    c.push_back(RationalInterval(Rational(-r), r));
    return IntervalPolynomial(std::move(c));
}

/// Interval polynomial trapping C_Y(2k -/+ t) on [0,1].
inline IntervalPolynomial combo_interval_poly(const PowerCombo& y, int two_k, Side side) {
    if (two_k < -2 || two_k > 16 || two_k % 2 != 0) throw std::invalid_argument("combo_approximations: 2k must be even in [-2,16]");
    if ((two_k == -2 && side == Side::left) || (two_k == 16 && side == Side::right))
        throw std::invalid_argument("combo_approximations: expansion leaves [-2,16]");
    // s = 2k + sigma t
    const Rational sigma = side == Side::left ? Rational(-1) : Rational(1);
    const IntervalPolynomial s = IntervalPolynomial::from_poly({Rational(two_k), sigma});
    const IntervalPolynomial s2 = s * s;
    IntervalPolynomial total = IntervalPolynomial::from_poly({Rational(0)});
    for (int i = 0; i < 3; ++i) {
        const IntervalPolynomial lin = IntervalPolynomial::from_poly({y.a[i]}) + IntervalPolynomial::from_poly({y.b[i]}) * s +
                                       IntervalPolynomial::from_poly({y.c[i]}) * s2;
        total = total + lin * exp_taylor(i + 2, two_k, side);
    }
    return total;
}

/// under(t) <= C_Y(2k -/+ t) <= over(t) for t in [0,1].
inline ApproxPair combo_approximations(const PowerCombo& y, int two_k, Side side) {
    const auto env = ipoly_envelope(combo_interval_poly(y, two_k, side));
    return {env.min_poly, env.max_poly};
}

/// Exact enclosure of sqrt(m) by rational bisection to width <= 2^-bits.
inline RationalInterval sqrt_enclosure(int m, int bits = 40) {
    Rational lo(1), hi(m);
    const Rational target(m), tol = Rational(1) / pow2(bits);
    while (hi - lo > tol) {
        const Rational mid = (lo + hi) / 2;
        if (mid * mid > target)
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

/// Enclosure of C_Y(s) at an integer s.
inline RationalInterval combo_at_integer(const PowerCombo& y, int s) {
    RationalInterval total(Rational(0));
    for (int i = 0; i < 3; ++i) {
        const int m = i + 2;
        // m^(-s/2) = m^(-floor(s/2)) * (sqrt m)^(-(s mod 2))
        const int e = s >= 0 ? s / 2 : -((-s + 1) / 2);
        const Rational base = e >= 0 ? Rational(1) / rpow(Rational(m), e) : rpow(Rational(m), -e);
        RationalInterval w(base);
        if (m == 4) {
            w = RationalInterval(s >= 0 ? Rational(1) / pow2(s) : pow2(-s));
        } else if (s - 2 * e == 1) {
            const auto r = sqrt_enclosure(m);
            w = RationalInterval(Rational(base / r.hi()), Rational(base / r.lo()));
        }
        const Rational sq(s);
        const Rational lin = y.a[i] + y.b[i] * sq + y.c[i] * sq * sq;
        total += RationalInterval(lin) * w;
    }
    return total;
}

}  // namespace tbp
