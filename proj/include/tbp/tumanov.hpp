#pragma once

/**
 * @file tumanov.hpp
 * @brief Certificates that the interpolating G-combinations dominate the Riesz potentials.
 *
 * For each range of the exponent s, Gamma = a0 + a1 G_i + a2 G_j + a3 G_k + a4 G_l
 * matches R_s to first order at sqrt2 and sqrt3 and to zeroth order at 2. The
 * coefficients are power combos in s; here they are shown positive on every unit
 * s-interval via WPD of their under-approximations, and for the largest range the
 * polynomial behind Gamma/R - 1 is shown to have only simple roots.
 */

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tbp/positivity.hpp"
#include "tbp/power_combo.hpp"
#include "tbp/rational.hpp"

namespace tbp {

struct TumanovCase {
    int id = 0;
    int s_lo = 0, s_hi = 0;
    std::vector<std::string> potentials;  // G names paired with a1..a4
    std::vector<int> powers;              // k for each of a1..a4 (0 marks the G10# combination)
    long denominator = 1;
    std::array<PowerCombo, 6> rows;       // a0, a1, a2, a3, a4, delta
};

inline TumanovCase tumanov_coefficients(int id) {
    TumanovCase c;
    c.id = id;
    std::array<std::array<long, 6>, 6> m;
    switch (id) {
        case 1:
            c.s_lo = -2;
            c.s_hi = 0;
            c.potentials = {"G1", "G2", "G3", "G5"};
            c.powers = {1, 2, 3, 5};
            c.denominator = 144;
            m = {{{0, 0, -144, 0, 0, 0},
                  {-312, -96, 408, 24, 80, 0},
                  {684, -288, -396, -54, -144, 0},
                  {-402, 264, 138, 33, 68, 0},
                  {30, -24, -6, -3, -4, 0},
                  {2496, 768, -3264, -192, -640, -144}}};
            break;
        case 2:
            c.s_lo = 0;
            c.s_hi = 6;
            c.potentials = {"G1", "G2", "G4", "G6"};
            c.powers = {1, 2, 4, 6};
            c.denominator = 792;
            m = {{{0, 0, 792, 0, 0, 0},
                  {792, 1152, -1944, -54, -288, 0},
                  {-1254, -96, 1350, 87, 376, 0},
                  {528, -312, -216, -39, -98, 0},
                  {-66, 48, 18, 6, 10, 0},
                  {-6336, -9216, 15552, 432, 2304, 792}}};
            break;
        case 3:
            c.s_lo = 6;
            c.s_hi = 13;
            c.potentials = {"G1", "G2", "G5", "G10#"};
            c.powers = {1, 2, 5, 0};
            c.denominator = 268536;
            m = {{{0, 0, 268536, 0, 0, 0},
                  {88440, 503040, -591480, -4254, -65728, 0},
                  {-77586, -249648, 327234, 2361, 65896, 0},
                  {41808, -19440, -22368, -2430, -9076, 0},
                  {-402, 264, 138, 33, 68, 0},
                  {-707520, -4024320, 4731840, 34032, 525824, 268536}}};
            break;
        default:
            throw std::invalid_argument("tumanov: case must be 1, 2 or 3");
    }
    for (int i = 0; i < 6; ++i) c.rows[static_cast<std::size_t>(i)] = PowerCombo::from_row(m[static_cast<std::size_t>(i)], c.denominator);
    return c;
}

/// G_k(0) = 4^k; the G10# entry expands to G10 + 28 G5 + 102 G2.
inline Rational g_at_zero(int k) {
    if (k == 0) return rpow(Rational(4), 10) + 28 * rpow(Rational(4), 5) + 102 * rpow(Rational(4), 2);
    return rpow(Rational(4), k);
}

/// Gamma(0) = a0 + sum_k a_k G_k(0), as a combo in s.
inline PowerCombo gamma_at_zero(const TumanovCase& c) {
    PowerCombo g = c.rows[0];
    for (int i = 0; i < 4; ++i) g = g + g_at_zero(c.powers[static_cast<std::size_t>(i)]) * c.rows[static_cast<std::size_t>(i + 1)];
    return g;
}

/// One unit (or shorter) s-interval and the expansion used on it.
struct SPiece {
    Rational s_lo, s_hi;
    int two_k;
    Side side;
    Rational t_from, t_to;  // WPD runs on the segment t_from -> t_to; t_from is the excluded end
};

/// Unit s-interval [j, j+1] covered from the nearest even integer.
inline SPiece unit_piece(int j) {
    if (j % 2 == 0) return {Rational(j), Rational(j + 1), j, Side::right, Rational(0), Rational(1)};
    return {Rational(j), Rational(j + 1), j + 1, Side::left, Rational(0), Rational(1)};
}

struct CertifiedFunction {
    std::string function;
    SPiece piece;
    bool wpd = false;      // on the whole piece
    bool split = false;    // certified only after bisecting the t-range
    int pieces = 0;        // number of WPD sub-segments used; 0 when uncertified
    bool pd = false;       // under-approximation PD on [0,1]
};

/// Number of equal sub-segments (a power of two, at most 2^max_depth) on which p is WPD
/// for every dyadic piece of the segment from a to b; 0 if none works.
inline int wpd_bisected(const RationalPoly& p, const Rational& a, const Rational& b, int max_depth) {
    for (int d = 0; d <= max_depth; ++d) {
        const int n = 1 << d;
        bool all = true;
        for (int i = 0; i < n && all; ++i)
            all = wpd(p, a + (b - a) * make_rational(i, n), a + (b - a) * make_rational(i + 1, n));
        if (all) return n;
    }
    return 0;
}

struct EndpointCheck {
    std::string function;
    int s;
    RationalInterval value;
    bool positive;
};

struct CoefficientReport {
    int case_id = 0;
    std::vector<CertifiedFunction> items;
    std::vector<EndpointCheck> endpoints;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    /// Functions WPD on their whole t-range.
    int wpd_count() const {
        int n = 0;
        for (const auto& i : items) n += i.wpd ? 1 : 0;
        return n;
    }
    /// Functions certified positive, possibly after bisection.
    int certified_count() const {
        int n = 0;
        for (const auto& i : items) n += i.pieces > 0 ? 1 : 0;
        return n;
    }
    int pd_count() const {
        int n = 0;
        for (const auto& i : items) n += i.pd ? 1 : 0;
        return n;
    }
};

inline std::string piece_name(const SPiece& p) { return "[" + p.s_lo.get_str() + "," + p.s_hi.get_str() + "]"; }

inline CertifiedFunction certify_piece(const std::string& name, const PowerCombo& y, const SPiece& p) {
    CertifiedFunction f{name, p};
    const auto under = combo_approximations(y, p.two_k, p.side).under;
    f.pd = p.t_from == 0 && p.t_to == 1 && is_pd(under);
    f.pieces = wpd_bisected(under, p.t_from, p.t_to, 6);
    f.wpd = f.pieces == 1;
    f.split = f.pieces > 1;
    return f;
}

/// Positivity of a1..a4 and delta on the case's s-range (plus Gamma(0) < 0 for case 1).
inline CoefficientReport verify_coefficient_positivity(int id, bool extended = false) {
    const TumanovCase c = tumanov_coefficients(id);
    CoefficientReport r;
    r.case_id = id;
    const std::array<std::string, 5> names = {"a1", "a2", "a3", id == 3 ? "a4hat" : "a4", "delta"};
    std::vector<SPiece> pieces;
    std::vector<int> integer_s;
    if (id == 1) {
        pieces = {{Rational(-2), Rational(-1), -2, Side::right, Rational(0), Rational(1)},
                  {Rational(-1), Rational(0), 0, Side::left, Rational(0), Rational(1)}};
    } else {
        const int lo = (id == 3 && extended) ? 3 : c.s_lo;
        for (int j = lo; j < c.s_hi; ++j) pieces.push_back(unit_piece(j));
        for (int s = std::max(lo, 1); s <= c.s_hi; ++s) integer_s.push_back(s);
        if (id == 3 && extended)  // (13, 13 + 1/16] from the left expansion at 14
            pieces.push_back({Rational(13), Rational(13) + make_rational(1, 16), 14, Side::left, Rational(1), make_rational(15, 16)});
    }
    for (const auto& p : pieces)
        for (int i = 0; i < 5; ++i) {
            const auto f = certify_piece(names[static_cast<std::size_t>(i)], c.rows[static_cast<std::size_t>(i + 1)], p);
            if (f.pieces == 0) r.failures.push_back(f.function + " not WPD on s in " + piece_name(p));
            r.items.push_back(f);
        }
    if (id == 1)
        for (const auto& p : pieces) {
            const auto f = certify_piece("-gamma0", -gamma_at_zero(c), p);
            if (f.pieces == 0) r.failures.push_back("-gamma0 not WPD on s in " + piece_name(p));
            r.items.push_back(f);
        }
    for (int s : integer_s)
        for (int i = 0; i < 5; ++i) {
            const auto v = combo_at_integer(c.rows[static_cast<std::size_t>(i + 1)], s);
            const bool pos = v.lo() > 0;
            if (!pos) r.failures.push_back(names[static_cast<std::size_t>(i)] + " not positive at s=" + std::to_string(s));
            r.endpoints.push_back({names[static_cast<std::size_t>(i)], s, v, pos});
        }
    return r;
}

/// Case-3 coefficients of G_k in Gamma after expanding G10#: index k = 0..10.
inline std::array<PowerCombo, 11> case3_g_coefficients() {
    const auto c = tumanov_coefficients(3);
    std::array<PowerCombo, 11> g{};
    g[0] = c.rows[0];
    g[1] = c.rows[1];
    g[2] = c.rows[2] + Rational(102) * c.rows[4];
    g[5] = c.rows[3] + Rational(28) * c.rows[4];
    g[10] = c.rows[4];
    return g;
}

/// phi_s(t) = s Gamma(r) + r Gamma'(r) with t = 4 - r^2, using r G_k' = 2k G_k - 8k G_{k-1}.
/// Coefficient i multiplies t^i.
inline std::vector<PowerCombo> case3_phi() {
    const auto g = case3_g_coefficients();
    std::vector<PowerCombo> phi(11);
    phi[0] = g[0].times_s_plus(Rational(0));
    for (int k = 1; k <= 10; ++k) {
        phi[static_cast<std::size_t>(k)] = phi[static_cast<std::size_t>(k)] + g[static_cast<std::size_t>(k)].times_s_plus(Rational(2 * k));
        phi[static_cast<std::size_t>(k - 1)] = phi[static_cast<std::size_t>(k - 1)] + Rational(-8 * k) * g[static_cast<std::size_t>(k)];
    }
    return phi;
}

/// d/dt of phi.
inline std::vector<PowerCombo> case3_phi_derivative() {
    const auto phi = case3_phi();
    std::vector<PowerCombo> d(phi.size() - 1);
    for (std::size_t i = 1; i < phi.size(); ++i) d[i - 1] = Rational(static_cast<long>(i)) * phi[i];
    return d;
}

/// phi at an integer s, exactly when s is even; returned as interval coefficients.
inline std::vector<RationalInterval> case3_phi_at(int s) {
    std::vector<RationalInterval> out;
    for (const auto& y : case3_phi()) out.push_back(combo_at_integer(y, s));
    return out;
}

/// Two-variable bound: sum_i bound_i(t) (4u)^i for (t,u) in [0,1]^2.
inline MultiPoly lift_to_square(const std::vector<RationalPoly>& per_power) {
    std::size_t dt = 0;
    for (const auto& p : per_power) dt = std::max(dt, p.size());
    const int du = static_cast<int>(per_power.size()) - 1;
    std::vector<Rational> coeffs((dt) * static_cast<std::size_t>(du + 1), Rational(0));
    for (int i = 0; i <= du; ++i) {
        const Rational w = rpow(Rational(4), i);
        const auto& p = per_power[static_cast<std::size_t>(i)];
        for (std::size_t e = 0; e < p.size(); ++e) coeffs[e * static_cast<std::size_t>(du + 1) + static_cast<std::size_t>(i)] = w * p[e];
    }
    return MultiPoly::from_rational({static_cast<int>(dt) - 1, du}, coeffs);
}

struct SimpleRootInterval {
    SPiece piece;
    PdResult result;
};

struct SimpleRootReport {
    std::vector<SimpleRootInterval> intervals;
    bool ok() const {
        for (const auto& i : intervals)
            if (i.result.status != PdStatus::certified) return false;
        return !intervals.empty();
    }
};

/// The four bounding polynomials for phi and phi' on one unit s-interval.
inline std::vector<MultiPoly> case3_bounds(const SPiece& p) {
    std::vector<MultiPoly> out;
    for (const auto& combos : {case3_phi(), case3_phi_derivative()}) {
        std::vector<RationalPoly> under, over;
        for (const auto& y : combos) {
            const auto a = combo_approximations(y, p.two_k, p.side);
            under.push_back(a.under);
            over.push_back(a.over);
        }
        out.push_back(lift_to_square(under));
        out.push_back(-lift_to_square(over));
    }
    return out;
}

/// No common zero of phi_s and its t-derivative on [6,13] x [0,4], one unit interval at a time.
inline SimpleRootReport case3_simple_roots(std::uint64_t budget = kDefaultPdBudget) {
    SimpleRootReport r;
    for (int j = 6; j < 13; ++j) {
        const SPiece p = unit_piece(j);
        r.intervals.push_back({p, positive_dominance(case3_bounds(p), budget)});
    }
    return r;
}

}  // namespace tbp
