#pragma once

/**
 * @file hessian.hpp
 * @brief Local minimality of the triangular bipyramid, certified exactly in Q(sqrt 3).
 *
 * The Hessian of E at P0 is bounded below by the alternating criterion on its
 * characteristic polynomial. Over the small box around P0 the Hessian moves by at
 * most sqrt7 * eps * F, where F is bounded by the norm of the third partials at P0
 * plus a uniform offset covering the Taylor remainder.
 */

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbp/jet.hpp"
#include "tbp/qsqrt3.hpp"
#include "tbp/rational.hpp"
#include "tbp/symbolic.hpp"

namespace tbp {

using Matrix7 = std::array<std::array<QSqrt3, 7>, 7>;
using PowerList = std::vector<std::pair<int, Rational>>;
using QPoly = std::vector<QSqrt3>;  // coefficient i multiplies t^i

/// The point P0 = (1, -1/2, -sqrt3/2, 0, 0, -1/2, sqrt3/2).
inline std::array<QSqrt3, 7> tbp_point() {
    const QSqrt3 h(make_rational(-1, 2)), s(Rational(0), make_rational(1, 2));
    return {QSqrt3(1), h, -s, QSqrt3(0), QSqrt3(0), h, s};
}

/// Base points of the four sphere points at P0, as (a, b) pairs.
inline std::array<std::array<QSqrt3, 2>, 4> tbp_plane_points() {
    const auto p = tbp_point();
    return {{{p[0], QSqrt3(0)}, {p[1], p[2]}, {p[3], p[4]}, {p[5], p[6]}}};
}

namespace detail {

inline std::shared_ptr<const JetSpace> jet_space(int nvars, int degree) {
    static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
    auto& s = cache[{nvars, degree}];
    if (!s) s = std::make_shared<const JetSpace>(nvars, degree);
    return s;
}

inline Rational factorial_of(const std::vector<int>& e) {
    Rational f(1);
    for (int v : e) f *= factorial(v);
    return f;
}

}  // namespace detail

/// Jet of f_k at (a0, b0) in the two local variables.
inline Jet<QSqrt3> point_term_jet(int k, const QSqrt3& a0, const QSqrt3& b0, int degree) {
    const auto sp = detail::jet_space(2, degree);
    using J = Jet<QSqrt3>;
    const J a = J::variable(sp, 0, a0), b = J::variable(sp, 1, b0);
    const J u = a * a + b * b;
    const J A = J::constant(sp, QSqrt3(1)) + u;
    return QSqrt3(rpow(Rational(4), k)) * (u * A.reciprocal()).pow(k);
}

/// Jet of g_k at (a0, b0, c0, d0) in the four local variables.
inline Jet<QSqrt3> pair_term_jet(int k, const std::array<QSqrt3, 4>& x0, int degree) {
    const auto sp = detail::jet_space(4, degree);
    using J = Jet<QSqrt3>;
    const J a = J::variable(sp, 0, x0[0]), b = J::variable(sp, 1, x0[1]);
    const J c = J::variable(sp, 2, x0[2]), d = J::variable(sp, 3, x0[3]);
    const J one = J::constant(sp, QSqrt3(1));
    const J u = a * a + b * b, v = c * c + d * d;
    const J n = one + QSqrt3(2) * (a * c + b * d) + u * v;
    return QSqrt3(rpow(Rational(4), k)) * (n * ((one + u) * (one + v)).reciprocal()).pow(k);
}

/// All partials of E of weight <= max_weight at P0, keyed by 7-variable multi-index.
class LocalPartials {
public:
    LocalPartials(const PowerList& powers, int max_weight) {
        const auto sp7 = detail::jet_space(7, max_weight);
        coeff_.assign(sp7->size(), QSqrt3(0));
        sp7_ = sp7;
        const auto pts = tbp_plane_points();
        for (const auto& [k, w] : powers) {
            for (int i = 0; i < 4; ++i) {
                const auto s = point_slots(i);
                accumulate(point_term_jet(k, pts[i][0], pts[i][1], max_weight), {s[0], s[1]}, w);
            }
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    const auto si = point_slots(i), sj = point_slots(j);
                    accumulate(pair_term_jet(k, {pts[i][0], pts[i][1], pts[j][0], pts[j][1]}, max_weight),
                               {si[0], si[1], sj[0], sj[1]}, w);
                }
        }
    }

    /// d_I E(P0).
    QSqrt3 at(const std::array<int, 7>& index) const {
        std::vector<int> e(index.begin(), index.end());
        return coeff_[static_cast<std::size_t>(sp7_->index_of(e))] * QSqrt3(detail::factorial_of(e));
    }
    QSqrt3 value() const { return coeff_[0]; }

    std::array<QSqrt3, 7> gradient() const {
        std::array<QSqrt3, 7> g;
        for (int i = 0; i < 7; ++i) g[i] = at(unit(i));
        return g;
    }

    Matrix7 hessian() const {
        Matrix7 h;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                auto idx = unit(i);
                ++idx[static_cast<std::size_t>(j)];
                h[i][j] = at(idx);
            }
        return h;
    }

    /// The 343 ordered third partials d_i d_j d_l E(P0), lexicographic in (i, j, l).
    std::vector<QSqrt3> third_partials() const {
        std::vector<QSqrt3> v;
        v.reserve(343);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                for (int l = 0; l < 7; ++l) {
                    auto idx = unit(i);
                    ++idx[static_cast<std::size_t>(j)];
                    ++idx[static_cast<std::size_t>(l)];
                    v.push_back(at(idx));
                }
        return v;
    }

private:
    static std::array<int, 7> unit(int i) {
        std::array<int, 7> u{};
        u[static_cast<std::size_t>(i)] = 1;
        return u;
    }

    void accumulate(const Jet<QSqrt3>& jet, const std::vector<int>& slots, const Rational& w) {
        const auto& sp = jet.space();
        for (std::size_t m = 0; m < sp.size(); ++m) {
            const auto& e = sp.exponents(m);
            std::vector<int> g(7, 0);
            bool ok = true;
            for (std::size_t v = 0; v < e.size(); ++v) {
                if (e[v] == 0) continue;
                if (slots[v] < 0) {
                    ok = false;  // derivative along a coordinate held at zero
                    break;
                }
                g[static_cast<std::size_t>(slots[v])] = e[v];
            }
            if (!ok || jet.coeff(m) == QSqrt3(0)) continue;
            auto& c = coeff_[static_cast<std::size_t>(sp7_->index_of(g))];
            c = c + QSqrt3(w) * jet.coeff(m);
        }
    }

    std::shared_ptr<const JetSpace> sp7_;
    std::vector<QSqrt3> coeff_;
};

/// det(t I - M) by Berkowitz's division-free algorithm.
template <std::size_t N>
QPoly characteristic_polynomial(const std::array<std::array<QSqrt3, N>, N>& m) {
    // Berkowitz: build the Toeplitz-product vector for the leading r x r minors.
    QPoly c = {QSqrt3(1), -m[0][0]};  // descending powers, length r+1
    for (std::size_t r = 1; r < N; ++r) {
        // partition of the (r+1) x (r+1) leading minor: [[A, R], [C, a]] with a = m[r][r]
        std::vector<std::vector<QSqrt3>> A(r, std::vector<QSqrt3>(r));
        std::vector<QSqrt3> R(r), C(r);
        for (std::size_t i = 0; i < r; ++i) {
            R[i] = m[i][r];
            C[i] = m[r][i];
            for (std::size_t j = 0; j < r; ++j) A[i][j] = m[i][j];
        }
        // t_0 = 1, t_1 = -a, t_{k+1} = -C A^{k-1} R for k >= 1
        std::vector<QSqrt3> t(r + 2);
        t[0] = QSqrt3(1);
        t[1] = -m[r][r];
        std::vector<QSqrt3> v = R;
        for (std::size_t k = 2; k <= r + 1; ++k) {
            QSqrt3 s(0);
            for (std::size_t i = 0; i < r; ++i) s += C[i] * v[i];
            t[k] = -s;
            std::vector<QSqrt3> nv(r, QSqrt3(0));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) nv[i] += A[i][j] * v[j];
            v = std::move(nv);
        }
        // new = Toeplitz(t) * c, lengths (r+2) x (r+1)
        QPoly n(r + 2, QSqrt3(0));
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= i && j < r + 1; ++j) n[i] += t[i - j] * c[j];
        c = std::move(n);
    }
    return QPoly(c.rbegin(), c.rend());  // ascending powers
}

/// p(t + lambda).
inline QPoly taylor_shift(const QPoly& p, const Rational& lambda) {
    QPoly r(p.size(), QSqrt3(0));
    // Horner: r = r * (t + lambda) + p_i
    for (std::size_t ii = p.size(); ii-- > 0;) {
        QPoly n(p.size(), QSqrt3(0));
        for (std::size_t j = 0; j + 1 < p.size(); ++j) {
            n[j + 1] += r[j];
            n[j] += QSqrt3(lambda) * r[j];
        }
        n[0] += p[ii];
        r = std::move(n);
    }
    return r;
}

/// Nonvanishing coefficients whose signs alternate: no real root <= 0.
inline bool is_alternating(const QPoly& p) {
    if (p.empty()) return false;
    const int n = static_cast<int>(p.size()) - 1;
    const int lead = p.back().sign();
    for (int i = 0; i <= n; ++i) {
        const int want = ((n - i) % 2 == 0) ? lead : -lead;
        if (p[static_cast<std::size_t>(i)].sign() != want) return false;
    }
    return true;
}

/// True iff every eigenvalue of the symmetric matrix m exceeds lambda.
template <std::size_t N>
bool alternating_criterion(const std::array<std::array<QSqrt3, N>, N>& m, const Rational& lambda) {
    return is_alternating(taylor_shift(characteristic_polynomial(m), lambda));
}

struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Combination named by a tag: "2".."10" or "g10#".
inline PowerList combo_from_tag(const std::string& tag) {
    if (tag == "g10#" || tag == "10#") return {{10, Rational(1)}, {5, Rational(28)}, {2, Rational(102)}};
    std::string t = tag;
    if (!t.empty() && t[0] == 'g') t = t.substr(1);
    const int k = std::stoi(t);
    if (k < 2 || k > 10) throw std::invalid_argument("hessian: power must lie in 2..10");
    return {{k, Rational(1)}};
}

inline Matrix7 hessian_at_tbp(const PowerList& powers) { return LocalPartials(powers, 2).hessian(); }

struct HessianBound {
    Rational lambda;
    Matrix7 hessian;
    QPoly shifted;  // characteristic polynomial of H at t + lambda
};

/// Certifies the lowest Hessian eigenvalue at P0 exceeds lambda; throws "criterion-inconclusive" otherwise.
inline HessianBound hessian_lower_bound(const PowerList& powers, const Rational& lambda) {
    HessianBound b{lambda, hessian_at_tbp(powers), {}};
    b.shifted = taylor_shift(characteristic_polynomial(b.hessian), lambda);
    if (!is_alternating(b.shifted)) throw CertificationFailure("criterion-inconclusive");
    return b;
}

/// Published eigenvalue bounds: 1, 10, 24, 36, 43 for k = 2..6 and 1448 for the combination.
inline Rational published_lambda(const std::string& tag) {
    if (tag == "g10#" || tag == "10#") return Rational(1448);
    static const std::map<int, int> lam = {{2, 1}, {3, 10}, {4, 24}, {5, 36}, {6, 43}};
    const auto it = lam.find(std::stoi(tag[0] == 'g' ? tag.substr(1) : tag));
    if (it == lam.end()) throw std::invalid_argument("no published eigenvalue bound for " + tag);
    return Rational(it->second);
}

/// sup over weight-8 multi-indices of the coefficient sum of the numerator of d_I g_k.
inline BigInt m8_global_bound(int k) {
    if (k < 2 || k > 10) throw std::invalid_argument("m8_global_bound: k must lie in 2..10");
    static std::map<int, BigInt> memo;
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    const auto r = coefficient_sum_supremum(pair_term(k), 8);
    if (!r.premise_holds) throw std::logic_error("m8_global_bound: degree premise violated");
    return memo[k] = r.value;
}

/// Same supremum for the single-point term f_k.
inline BigInt m8_point_bound(int k) {
    static std::map<int, BigInt> memo;
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    const auto r = coefficient_sum_supremum(point_term(k), 8);
    if (!r.premise_holds) throw std::logic_error("m8_point_bound: degree premise violated");
    return memo[k] = r.value;
}

/// Global bound on weight-8 partials of E_k: a variable block meets one f term and three g terms.
inline BigInt m8_energy_bound(int k) { return m8_point_bound(k) + 3 * m8_global_bound(k); }

/// (7 eps)^5 / 5! * M8(E_k): the Taylor remainder in the third-partial bound.
inline Rational remainder_term(int k, const Rational& eps) {
    return rpow(7 * eps, 5) / factorial(5) * Rational(m8_energy_bound(k));
}

/// mu_j(f_k), mu_j(g_k): largest |d_I| over weight-j indices at the TBP points and point pairs.
struct MuValues {
    std::array<QSqrt3, 4> f;  // j = 4..7
    std::array<QSqrt3, 4> g;
};

inline MuValues mu_values(int k) {
    static std::map<int, MuValues> memo;
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    MuValues mv;
    for (auto& x : mv.f) x = QSqrt3(0);
    for (auto& x : mv.g) x = QSqrt3(0);
    const auto pts = tbp_plane_points();
    auto take = [](const Jet<QSqrt3>& jet, std::array<QSqrt3, 4>& out) {
        const auto& sp = jet.space();
        for (std::size_t m = 0; m < sp.size(); ++m) {
            const int w = sp.total_degree(m);
            if (w < 4) continue;
            const QSqrt3 d = qabs(jet.coeff(m) * QSqrt3(detail::factorial_of(sp.exponents(m))));
            auto& slot = out[static_cast<std::size_t>(w - 4)];
            if (slot < d) slot = d;
        }
    };
    for (int i = 0; i < 4; ++i) take(point_term_jet(k, pts[i][0], pts[i][1], 7), mv.f);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            take(pair_term_jet(k, {pts[i][0], pts[i][1], pts[j][0], pts[j][1]}, 7), mv.g);
    return memo[k] = mv;
}

/// mu*_{j+3} = (7 eps)^j / j! * (mu_{j+3}(f) + 3 mu_{j+3}(g)) for j = 1..4.
inline std::array<QSqrt3, 4> mu_star_bounds(int k, const Rational& eps) {
    const auto mv = mu_values(k);
    std::array<QSqrt3, 4> out;
    for (int j = 1; j <= 4; ++j)
        out[static_cast<std::size_t>(j - 1)] =
            QSqrt3(rpow(7 * eps, j) / factorial(j)) * (mv.f[j - 1] + QSqrt3(3) * mv.g[j - 1]);
    return out;
}

/// Upper rational bound r with r^2 > x, x >= 0, to resolution 2^-20.
inline Rational sqrt_upper(const QSqrt3& x) {
    const double approx = std::sqrt(std::max(0.0, x.to_double()));
    BigInt n = BigInt(std::ceil(std::ldexp(approx, 20))) + 1;
    Rational r = Rational(n) / pow2(20);
    while (!(QSqrt3(r * r) > x)) {
        n += 1;
        r = Rational(n) / pow2(20);
    }
    return r;
}

/// Bound on sqrt7 * eps * F_k over the box: an upper bound for sqrt(7 eps^2 sum (|V_i| + offset)^2).
struct ThirdPartialBound {
    int k;
    Rational eps;
    Rational offset;
    Rational remainder;
    std::array<QSqrt3, 4> mu_star;
    QSqrt3 squared;  // 7 eps^2 sum (|V_i| + offset)^2
    Rational bound;  // rational upper bound of sqrt(squared)
};

inline ThirdPartialBound third_partial_bound(int k, const Rational& eps, const Rational& offset) {
    ThirdPartialBound t{k, eps, offset, remainder_term(k, eps), mu_star_bounds(k, eps), QSqrt3(0), Rational(0)};
    // the offset must dominate the Taylor part of every M_{J,k}
    QSqrt3 taylor(t.remainder);
    for (const auto& m : t.mu_star) taylor += m;
    if (!(taylor < QSqrt3(offset))) throw CertificationFailure("offset below computed Taylor bound for k=" + std::to_string(k));
    const auto v = LocalPartials({{k, Rational(1)}}, 3).third_partials();
    QSqrt3 s(0);
    for (const auto& x : v) {
        const QSqrt3 y = qabs(x) + QSqrt3(offset);
        s += y * y;
    }
    t.squared = QSqrt3(7 * eps * eps) * s;
    t.bound = sqrt_upper(t.squared);
    return t;
}

struct HessianCertificate {
    std::string tag;
    Rational lambda;
    Rational epsilon;
    Rational f_bound;  // upper bound on sqrt7 * eps * F over the box
    Rational final_margin;
    std::vector<ThirdPartialBound> parts;
};

/// Positive definiteness of the Hessian of E throughout the box of radius eps around P0.
inline HessianCertificate certify_local_minimum(const std::string& tag) {
    HessianCertificate c;
    c.tag = tag;
    c.lambda = published_lambda(tag);
    hessian_lower_bound(combo_from_tag(tag), c.lambda);
    if (tag == "g10#" || tag == "10#") {
        c.epsilon = Rational(1) / pow2(18);
        const auto f10 = third_partial_bound(10, c.epsilon, Rational(6000));
        // F5 and F2 are bounded on the larger box, which contains this one
        const auto f5 = third_partial_bound(5, Rational(1) / pow2(15), Rational(500));
        const auto f2 = third_partial_bound(2, Rational(1) / pow2(15), Rational(500));
        // rescale sqrt7 * 2^-15 * |V| to sqrt7 * 2^-18 * |V|
        c.f_bound = f10.bound + (28 * f5.bound + 102 * f2.bound) / 8;
        c.parts = {f10, f5, f2};
    } else {
        const int k = std::stoi(tag[0] == 'g' ? tag.substr(1) : tag);
        c.epsilon = Rational(1) / pow2(15);
        const auto f = third_partial_bound(k, c.epsilon, Rational(500));
        c.f_bound = f.bound;
        c.parts = {f};
    }
    c.final_margin = c.lambda - c.f_bound;
    if (c.final_margin <= 0) throw CertificationFailure("non-positive margin for " + tag);
    return c;
}

}  // namespace tbp
