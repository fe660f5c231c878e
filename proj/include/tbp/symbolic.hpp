#pragma once

/**
 * @file symbolic.hpp
 * @brief Exact symbolic energy terms and their partial derivatives.
 *
 * Every pair term is P(a,b,c,d) / (A^e C^f) with A = 1+a^2+b^2, C = 1+c^2+d^2
 * and P an integer polynomial. Differentiation keeps that shape:
 * d/da (P/A^e) = (P_a A - 2 e a P) / A^(e+1).
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbp/rational.hpp"

namespace tbp {

/// Sparse polynomial in a,b,c,d with big integer coefficients, sorted by packed exponent.
class Poly4 {
public:
    using Key = std::uint32_t;  // 8 bits per exponent, a in the high byte
    using Term = std::pair<Key, BigInt>;

    static Key key(int ea, int eb, int ec, int ed) {
        if (ea < 0 || eb < 0 || ec < 0 || ed < 0 || ea > 255 || eb > 255 || ec > 255 || ed > 255)
            throw std::out_of_range("Poly4: exponent out of range");
        return (Key(ea) << 24) | (Key(eb) << 16) | (Key(ec) << 8) | Key(ed);
    }
    static int exponent(Key k, int var) { return int((k >> (8 * (3 - var))) & 0xffu); }

    Poly4() = default;
    static Poly4 constant(const BigInt& c) {
        Poly4 p;
        if (c != 0) p.terms_.push_back({0, c});
        return p;
    }
    static Poly4 monomial(const BigInt& c, int ea, int eb, int ec, int ed) {
        Poly4 p;
        if (c != 0) p.terms_.push_back({key(ea, eb, ec, ed), c});
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    friend Poly4 operator+(const Poly4& x, const Poly4& y) {
        std::vector<Term> t = x.terms_;
        t.insert(t.end(), y.terms_.begin(), y.terms_.end());
        return from_unsorted(std::move(t));
    }
    Poly4 operator-() const {
        Poly4 r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }
    friend Poly4 operator-(const Poly4& x, const Poly4& y) { return x + (-y); }
    friend Poly4 operator*(const Poly4& x, const Poly4& y) {
        std::vector<Term> t;
        t.reserve(x.size() * y.size());
        for (const auto& [kx, cx] : x.terms_)
            for (const auto& [ky, cy] : y.terms_) t.push_back({add_keys(kx, ky), BigInt(cx * cy)});
        return from_unsorted(std::move(t));
    }
    friend bool operator==(const Poly4& x, const Poly4& y) { return x.terms_ == y.terms_; }

    Poly4 pow(int n) const {
        Poly4 r = constant(1), base = *this;
        while (n > 0) {
            if (n & 1) r = r * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return r;
    }

    /// Partial derivative in variable var (0..3).
    Poly4 derivative(int var) const {
        std::vector<Term> t;
        t.reserve(terms_.size());
        const Key unit = Key(1) << (8 * (3 - var));
        for (const auto& [k, c] : terms_) {
            const int e = exponent(k, var);
            if (e > 0) t.push_back({k - unit, BigInt(c * e)});
        }
        return from_unsorted(std::move(t));  // keys stay distinct, so this only re-sorts
    }

    /// Multiply by 2*e*x_var and subtract from (*this)' * D where D = 1 + x_var^2 + x_other^2.
    /// This is the numerator of d/dx_var (P / D^e).
    Poly4 quotient_rule(int var, int other, int e) const {
        std::vector<Term> t;
        t.reserve(4 * terms_.size());
        const Key uv = Key(1) << (8 * (3 - var)), uo = Key(1) << (8 * (3 - other));
        for (const auto& [k, c] : terms_) {
            const int ev = exponent(k, var);
            if (ev > 0) {
                const BigInt dc = c * ev;
                const Key kd = k - uv;
                t.push_back({kd, dc});
                t.push_back({kd + 2 * uv, dc});
                t.push_back({kd + 2 * uo, dc});
            }
            if (e != 0) t.push_back({k + uv, BigInt(-2 * e * c)});
        }
        return from_unsorted(std::move(t));
    }

    /// Sum of absolute values of the coefficients.
    BigInt abs_coeff_sum() const {
        BigInt s = 0;
        for (const auto& t : terms_) s += abs(t.second);
        return s;
    }

    /// Largest a+b degree and largest c+d degree over all monomials.
    std::pair<int, int> split_degrees() const {
        int ab = 0, cd = 0;
        for (const auto& t : terms_) {
            ab = std::max(ab, exponent(t.first, 0) + exponent(t.first, 1));
            cd = std::max(cd, exponent(t.first, 2) + exponent(t.first, 3));
        }
        return {ab, cd};
    }

    template <class Num>
    Num evaluate(const std::array<Num, 4>& x) const {
        // power tables per variable
        std::array<std::vector<Num>, 4> pw;
        for (int v = 0; v < 4; ++v) {
            int m = 0;
            for (const auto& t : terms_) m = std::max(m, exponent(t.first, v));
            pw[v].assign(static_cast<std::size_t>(m + 1), Num(1));
            for (int i = 1; i <= m; ++i) pw[v][i] = pw[v][i - 1] * x[v];
        }
        Num s(0);
        for (const auto& [k, c] : terms_) {
            Num m = Num(Rational(c));
            for (int v = 0; v < 4; ++v) {
                const int e = exponent(k, v);
                if (e) m = m * pw[v][static_cast<std::size_t>(e)];
            }
            s = s + m;
        }
        return s;
    }

private:
    static Key add_keys(Key x, Key y) {
        // guard each byte against carry
        for (int v = 0; v < 4; ++v)
            if (exponent(x, v) + exponent(y, v) > 255) throw std::out_of_range("Poly4: exponent overflow");
        return x + y;
    }
    static Poly4 from_unsorted(std::vector<Term> t) {
        std::sort(t.begin(), t.end(), [](const Term& l, const Term& r) { return l.first < r.first; });
        Poly4 p;
        p.terms_.reserve(t.size());
        for (auto& x : t) {
            if (!p.terms_.empty() && p.terms_.back().first == x.first)
                p.terms_.back().second += x.second;
            else
                p.terms_.push_back(std::move(x));
        }
        std::vector<Term> out;
        out.reserve(p.terms_.size());
        for (auto& x : p.terms_)
            if (x.second != 0) out.push_back(std::move(x));
        p.terms_ = std::move(out);
        return p;
    }
    std::vector<Term> terms_;
};

/// P / (A^e C^f) with A = 1+a^2+b^2, C = 1+c^2+d^2.
struct RationalFunction4 {
    Poly4 numerator;
    int a_exp = 0;
    int c_exp = 0;

    RationalFunction4 partial(int var) const {
        RationalFunction4 r;
        if (var < 2) {
            r.numerator = numerator.quotient_rule(var, 1 - var, a_exp);
            r.a_exp = a_exp + 1;
            r.c_exp = c_exp;
        } else {
            r.numerator = numerator.quotient_rule(var, 5 - var, c_exp);
            r.a_exp = a_exp;
            r.c_exp = c_exp + 1;
        }
        return r;
    }

    RationalFunction4 partial(const std::array<int, 4>& index) const {
        RationalFunction4 r = *this;
        for (int v = 0; v < 4; ++v)
            for (int i = 0; i < index[static_cast<std::size_t>(v)]; ++i) r = r.partial(v);
        return r;
    }

    /// Same function written over A^ea C^fc with ea >= a_exp, fc >= c_exp.
    RationalFunction4 lifted(int ea, int fc) const {
        if (ea < a_exp || fc < c_exp) throw std::invalid_argument("lifted: exponent too small");
        RationalFunction4 r;
        r.numerator = numerator * a_poly().pow(ea - a_exp) * c_poly().pow(fc - c_exp);
        r.a_exp = ea;
        r.c_exp = fc;
        return r;
    }

    /// True iff every monomial fits the bound |P|/(A^e C^f) <= sum |coeffs| on all of R^4.
    bool degree_premise() const {
        const auto [ab, cd] = numerator.split_degrees();
        return ab <= 2 * a_exp && cd <= 2 * c_exp;
    }

    template <class Num>
    Num evaluate(const std::array<Num, 4>& x) const {
        const Num A = Num(1) + x[0] * x[0] + x[1] * x[1];
        const Num C = Num(1) + x[2] * x[2] + x[3] * x[3];
        Num den(1);
        for (int i = 0; i < a_exp; ++i) den = den * A;
        for (int i = 0; i < c_exp; ++i) den = den * C;
        return numerator.evaluate(x) / den;
    }

    static Poly4 a_poly() { return Poly4::constant(1) + Poly4::monomial(1, 2, 0, 0, 0) + Poly4::monomial(1, 0, 2, 0, 0); }
    static Poly4 c_poly() { return Poly4::constant(1) + Poly4::monomial(1, 0, 0, 2, 0) + Poly4::monomial(1, 0, 0, 0, 2); }
};

/// Single-point term f_k(a,b) = (4 (a^2+b^2) / (1+a^2+b^2))^k.
inline RationalFunction4 point_term(int k) {
    const Poly4 u = Poly4::monomial(4, 2, 0, 0, 0) + Poly4::monomial(4, 0, 2, 0, 0);
    return {u.pow(k), k, 0};
}

/// Pair term g_k(a,b,c,d) = (4 N / (A C))^k, N = 1 + 2ac + 2bd + (a^2+b^2)(c^2+d^2).
inline RationalFunction4 pair_term(int k) {
    const Poly4 n = Poly4::constant(4) + Poly4::monomial(8, 1, 0, 1, 0) + Poly4::monomial(8, 0, 1, 0, 1) +
                    Poly4::monomial(4, 2, 0, 2, 0) + Poly4::monomial(4, 2, 0, 0, 2) + Poly4::monomial(4, 0, 2, 2, 0) +
                    Poly4::monomial(4, 0, 2, 0, 2);
    return {n.pow(k), k, k};
}

/// Multi-indices in four variables of total weight w, lexicographically descending in a.
inline std::vector<std::array<int, 4>> multi_indices(int w) {
    std::vector<std::array<int, 4>> out;
    for (int a = w; a >= 0; --a)
        for (int b = w - a; b >= 0; --b)
            for (int c = w - a - b; c >= 0; --c) out.push_back({a, b, c, w - a - b - c});
    return out;
}

/// Largest coefficient-sum |Pi_I| over weight-w partials of a term, with the index attaining it.
/// Walks sorted variable sequences depth-first so each partial costs one differentiation.
struct PartialSupremum {
    BigInt value = 0;
    std::array<int, 4> index{};
    int partials_visited = 0;
    bool premise_holds = true;
};

inline PartialSupremum coefficient_sum_supremum(const RationalFunction4& g, int weight) {
    PartialSupremum best;
    std::array<int, 4> idx{};
    auto dfs = [&](auto&& self, const RationalFunction4& cur, int depth, int min_var) -> void {
        if (depth == weight) {
            ++best.partials_visited;
            if (!cur.degree_premise()) best.premise_holds = false;
            const BigInt s = cur.numerator.abs_coeff_sum();
            if (s > best.value) {
                best.value = s;
                best.index = idx;
            }
            return;
        }
        for (int v = min_var; v < 4; ++v) {
            ++idx[static_cast<std::size_t>(v)];
            self(self, cur.partial(v), depth + 1, v);
            --idx[static_cast<std::size_t>(v)];
        }
    };
    dfs(dfs, g, 0, 0);
    return best;
}

/// Energy E_k in seven variables x1..x7: p0 = (x1, 0), p_i = (x_{2i}, x_{2i+1}).
/// Each term maps its local variables a,b,c,d to global indices 0..6 or -1 (held at zero / unused).
struct EnergyTerm {
    RationalFunction4 fn;
    std::array<int, 4> slots;
    Rational weight{1};
};

struct EnergyExpression {
    std::vector<EnergyTerm> terms;

    template <class Num>
    Num evaluate(const std::array<Num, 7>& x) const {
        Num s(0);
        for (const auto& t : terms) {
            std::array<Num, 4> loc{Num(0), Num(0), Num(0), Num(0)};
            for (int v = 0; v < 4; ++v)
                if (t.slots[static_cast<std::size_t>(v)] >= 0)
                    loc[static_cast<std::size_t>(v)] = x[static_cast<std::size_t>(t.slots[static_cast<std::size_t>(v)])];
            s = s + Num(t.weight) * t.fn.evaluate(loc);
        }
        return s;
    }
};

/// Global variable slots of point i (0..3).
inline std::array<int, 2> point_slots(int i) {
    if (i == 0) return {0, -1};
    return {2 * i - 1, 2 * i};
}

/// E_k for the single power k, or a weighted combination of powers.
inline EnergyExpression build_energy_expression(const std::vector<std::pair<int, Rational>>& powers) {
    EnergyExpression e;
    for (const auto& [k, w] : powers) {
        const auto f = point_term(k);
        const auto g = pair_term(k);
        for (int i = 0; i < 4; ++i) {
            const auto s = point_slots(i);
            e.terms.push_back({f, {s[0], s[1], -1, -1}, w});
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const auto si = point_slots(i), sj = point_slots(j);
                e.terms.push_back({g, {si[0], si[1], sj[0], sj[1]}, w});
            }
    }
    return e;
}

inline EnergyExpression build_energy_expression(int k) { return build_energy_expression({{k, Rational(1)}}); }

/// Symbolic partial of E in the seven global variables. Terms that cannot depend on
/// some differentiated variable drop out.
inline EnergyExpression partial_derivative(const EnergyExpression& e, const std::array<int, 7>& index) {
    EnergyExpression r;
    for (const auto& t : e.terms) {
        std::array<int, 4> local{};
        int used = 0, total = 0;
        for (int g = 0; g < 7; ++g) total += index[static_cast<std::size_t>(g)];
        for (int v = 0; v < 4; ++v) {
            const int g = t.slots[static_cast<std::size_t>(v)];
            if (g >= 0) {
                local[static_cast<std::size_t>(v)] = index[static_cast<std::size_t>(g)];
                used += local[static_cast<std::size_t>(v)];
            }
        }
        if (used != total) continue;
        r.terms.push_back({t.fn.partial(local), t.slots, t.weight});
    }
    return r;
}

}  // namespace tbp
