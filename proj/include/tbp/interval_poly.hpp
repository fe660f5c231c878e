#pragma once

/**
 * @file interval_poly.hpp
 * @brief Univariate polynomials with exact rational-interval coefficients.
 *
 * An interval polynomial I0 + I1 t + ... + In t^n traps an ordinary polynomial
 * when every coefficient lies in the matching interval. Arithmetic preserves
 * trapping, and for t in [0,1] the left/right endpoint polynomials bound every
 * trapped polynomial from below/above.
 */

#include <stdexcept>
#include <utility>
#include <vector>

#include "tbp/rational.hpp"

namespace tbp {

/// Dense univariate polynomial with Rational coefficients, lowest degree first.
using RationalPoly = std::vector<Rational>;

inline Rational evaluate(const RationalPoly& p, const Rational& t) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
    return acc;
}

class IntervalPolynomial {
public:
    IntervalPolynomial() : coeffs_(1, RationalInterval(0L)) {}
    explicit IntervalPolynomial(std::vector<RationalInterval> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("IntervalPolynomial: empty coefficient list");
    }
    static IntervalPolynomial from_poly(const RationalPoly& p) {
        std::vector<RationalInterval> c;
        c.reserve(p.size());
        for (const auto& v : p) c.emplace_back(v);
        if (c.empty()) c.emplace_back(0L);
        return IntervalPolynomial(std::move(c));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<RationalInterval>& coefficients() const { return coeffs_; }
    const RationalInterval& operator[](std::size_t i) const { return coeffs_[i]; }

    bool traps(const RationalPoly& p) const {
        for (std::size_t i = 0; i < std::max(p.size(), coeffs_.size()); ++i) {
            const Rational c = i < p.size() ? p[i] : Rational(0);
            const RationalInterval iv = i < coeffs_.size() ? coeffs_[i] : RationalInterval(0L);
            if (!iv.contains(c)) return false;
        }
        return true;
    }

    friend IntervalPolynomial operator+(const IntervalPolynomial& a, const IntervalPolynomial& b) {
        std::vector<RationalInterval> c(std::max(a.coeffs_.size(), b.coeffs_.size()), RationalInterval(0L));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return IntervalPolynomial(std::move(c));
    }
    friend IntervalPolynomial operator-(const IntervalPolynomial& a, const IntervalPolynomial& b) {
        std::vector<RationalInterval> c(std::max(a.coeffs_.size(), b.coeffs_.size()), RationalInterval(0L));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return IntervalPolynomial(std::move(c));
    }
    friend IntervalPolynomial operator*(const IntervalPolynomial& a, const IntervalPolynomial& b) {
        std::vector<RationalInterval> c(a.coeffs_.size() + b.coeffs_.size() - 1, RationalInterval(0L));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return IntervalPolynomial(std::move(c));
    }

    /// Interval evaluation by Horner's rule; encloses p(t) for every trapped p.
    RationalInterval evaluate(const RationalInterval& t) const {
        RationalInterval acc = coeffs_.back();
        for (int i = degree() - 1; i >= 0; --i) acc = acc * t + coeffs_[static_cast<std::size_t>(i)];
        return acc;
    }

private:
    std::vector<RationalInterval> coeffs_;
};

struct PolyEnvelope {
    RationalPoly min_poly;
    RationalPoly max_poly;
};

/// Left-endpoint and right-endpoint polynomials; valid bounds for t in [0,1].
inline PolyEnvelope ipoly_envelope(const IntervalPolynomial& p) {
    PolyEnvelope env;
    env.min_poly.reserve(p.coefficients().size());
    env.max_poly.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients()) {
        env.min_poly.push_back(c.lo());
        env.max_poly.push_back(c.hi());
    }
    return env;
}

}  // namespace tbp
