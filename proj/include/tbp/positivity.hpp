#pragma once

/**
 * @file positivity.hpp
 * @brief Positivity certificates for polynomials on the unit cube.
 *
 * WPD (weak positive dominance) proves a univariate polynomial positive on (0,1].
 * PD (positive dominance) proves a multivariate polynomial positive on [0,1]^n;
 * when it fails the cube is halved along the axis named by a marker and both
 * halves are retried, depth first.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tbp/interval_poly.hpp"
#include "tbp/rational.hpp"

namespace tbp {

/// p(x + a)
inline RationalPoly taylor_shift(RationalPoly p, const Rational& a) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) p[j - 1] += a * p[j];
    return p;
}

/// p(a + (b - a) x): carries [0,1] onto the segment from a to b.
inline RationalPoly affine_compose(const RationalPoly& p, const Rational& a, const Rational& b) {
    RationalPoly q = taylor_shift(p, a);
    Rational h(1);
    const Rational w = b - a;
    for (auto& c : q) {
        c *= h;
        h *= w;
    }
    return q;
}

/// Partial sums A_k = a_0 + ... + a_k all >= 0 and A_n > 0.
inline bool is_wpd(const RationalPoly& p) {
    Rational s(0);
    for (const auto& c : p) {
        s += c;
        if (s < 0) return false;
    }
    return s > 0;
}

/// All partial sums > 0.
inline bool is_pd(const RationalPoly& p) {
    Rational s(0);
    for (const auto& c : p) {
        s += c;
        if (s <= 0) return false;
    }
    return !p.empty();
}

/// WPD of p on the segment from a to b; certifies p > 0 there except possibly at a.
inline bool wpd(const RationalPoly& p, const Rational& a, const Rational& b) { return is_wpd(affine_compose(p, a, b)); }

/// Dense polynomial in n variables with integer coefficients; positive rescaling is free.
class MultiPoly {
public:
    MultiPoly() = default;
    explicit MultiPoly(std::vector<int> degrees) : deg_(std::move(degrees)) {
        std::size_t n = 1;
        for (int d : deg_) n *= static_cast<std::size_t>(d + 1);
        c_.assign(n, BigInt(0));
    }

    /// Scales rational coefficients to integers by a positive factor.
    static MultiPoly from_rational(const std::vector<int>& degrees, const std::vector<Rational>& coeffs) {
        MultiPoly p(degrees);
        if (coeffs.size() != p.c_.size()) throw std::invalid_argument("MultiPoly: coefficient count mismatch");
        BigInt l = 1;
        for (const auto& q : coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        for (std::size_t i = 0; i < coeffs.size(); ++i) p.c_[i] = coeffs[i].get_num() * (l / coeffs[i].get_den());
        p.reduce();
        return p;
    }

    static MultiPoly univariate(const RationalPoly& p) {
        return from_rational({static_cast<int>(p.size()) - 1}, std::vector<Rational>(p.begin(), p.end()));
    }

    int nvars() const { return static_cast<int>(deg_.size()); }
    const std::vector<int>& degrees() const { return deg_; }
    const std::vector<BigInt>& coefficients() const { return c_; }

    /// Flat index: the last variable varies fastest.
    std::size_t index(const std::vector<int>& e) const {
        std::size_t idx = 0;
        for (std::size_t v = 0; v < deg_.size(); ++v) idx = idx * static_cast<std::size_t>(deg_[v] + 1) + static_cast<std::size_t>(e[v]);
        return idx;
    }
    BigInt& at(const std::vector<int>& e) { return c_[index(e)]; }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    /// Lattice partial sums sum_{I' <= I} a_I' all > 0.
    bool is_pd() const {
        std::vector<BigInt> s = c_;
        std::size_t stride = 1;
        for (int v = nvars() - 1; v >= 0; --v) {
            const std::size_t len = static_cast<std::size_t>(deg_[v] + 1);
            for (std::size_t i = 0; i < s.size(); ++i)
                if ((i / stride) % len != 0) s[i] += s[i - stride];
            stride *= len;
        }
        for (const auto& x : s)
            if (x <= 0) return false;
        return true;
    }

    /// P composed with x_j -> (x_j + half)/2, half in {0, 1}, up to a positive factor.
    MultiPoly subdivide(int axis, int half) const {
        MultiPoly r = *this;
        const std::size_t len = static_cast<std::size_t>(deg_[axis] + 1);
        std::size_t stride = 1;
        for (int v = nvars() - 1; v > axis; --v) stride *= static_cast<std::size_t>(deg_[v] + 1);
        const int d = deg_[axis];
        for (std::size_t base = 0; base < c_.size(); ++base) {
            if ((base / stride) % len != 0) continue;
            // fiber along the axis: multiply x^e by 2^(d-e), then shift by 1 if needed
            std::vector<BigInt> f(len);
            for (std::size_t e = 0; e < len; ++e) {
                f[e] = c_[base + e * stride];
                mpz_mul_2exp(f[e].get_mpz_t(), f[e].get_mpz_t(), static_cast<unsigned long>(d - static_cast<int>(e)));
            }
            if (half == 1)
                for (std::size_t i = 0; i + 1 < len; ++i)
                    for (std::size_t j = len - 1; j > i; --j) f[j - 1] += f[j];
            for (std::size_t e = 0; e < len; ++e) r.c_[base + e * stride] = f[e];
        }
        r.reduce();
        return r;
    }

    template <class Num>
    Num evaluate(const std::vector<Num>& x) const {
        Num s(0);
        std::vector<int> e(deg_.size(), 0);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            std::size_t rem = i;
            for (int v = nvars() - 1; v >= 0; --v) {
                e[static_cast<std::size_t>(v)] = static_cast<int>(rem % static_cast<std::size_t>(deg_[v] + 1));
                rem /= static_cast<std::size_t>(deg_[v] + 1);
            }
            if (c_[i] == 0) continue;
            Num m = Num(Rational(c_[i]));
            for (std::size_t v = 0; v < deg_.size(); ++v)
                for (int k = 0; k < e[v]; ++k) m = m * x[v];
            s = s + m;
        }
        return s;
    }

private:
    void reduce() {
        BigInt g = 0;
        for (const auto& x : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g > 1)
            for (auto& x : c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
    std::vector<int> deg_;
    std::vector<BigInt> c_;
};

/// Marker: per-axis subdivision depth. The youngest entry is the first minimum from the left.
using Marker = std::vector<int>;

inline int youngest_entry(const Marker& m) {
    return static_cast<int>(std::min_element(m.begin(), m.end()) - m.begin());
}

inline Marker marker_successor(Marker m) {
    ++m[static_cast<std::size_t>(youngest_entry(m))];
    return m;
}

struct MarkedPolynomial {
    MultiPoly poly;
    Marker marker;
};

enum class PdStatus { certified, budget_exhausted };

struct PdResult {
    PdStatus status = PdStatus::budget_exhausted;
    std::uint64_t expansions = 0;  // nodes that failed PD and were split
    std::uint64_t nodes = 0;       // nodes tested
    int max_depth = 0;
};

constexpr std::uint64_t kDefaultPdBudget = 1000000;

/// Halting proves that at each point of [0,1]^n at least one of the polynomials is positive.
inline PdResult positive_dominance(const std::vector<MultiPoly>& polys, std::uint64_t budget = kDefaultPdBudget) {
    if (polys.empty()) throw std::invalid_argument("positive_dominance: empty list");
    const int n = polys.front().nvars();
    for (const auto& p : polys)
        if (p.nvars() != n) throw std::invalid_argument("positive_dominance: mixed dimensions");
    struct Node {
        std::vector<MultiPoly> polys;
        Marker marker;
    };
    PdResult r;
    std::vector<Node> list;
    list.push_back({polys, Marker(static_cast<std::size_t>(n), 0)});
    while (!list.empty()) {
        Node node = std::move(list.back());
        list.pop_back();
        ++r.nodes;
        bool ok = false;
        for (const auto& p : node.polys)
            if (p.is_pd()) {
                ok = true;
                break;
            }
        if (ok) continue;
        if (r.expansions >= budget) return r;
        ++r.expansions;
        const int axis = youngest_entry(node.marker);
        const Marker next = marker_successor(node.marker);
        r.max_depth = std::max(r.max_depth, std::accumulate(next.begin(), next.end(), 0));
        Node lower{{}, next}, upper{{}, next};
        for (const auto& p : node.polys) {
            lower.polys.push_back(p.subdivide(axis, 0));
            upper.polys.push_back(p.subdivide(axis, 1));
        }
        list.push_back(std::move(lower));
        list.push_back(std::move(upper));
    }
    r.status = PdStatus::certified;
    return r;
}

inline PdResult positive_dominance(const MultiPoly& p, std::uint64_t budget = kDefaultPdBudget) {
    return positive_dominance(std::vector<MultiPoly>{p}, budget);
}

}  // namespace tbp
