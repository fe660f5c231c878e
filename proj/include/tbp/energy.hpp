#pragma once

/**
 * @file energy.hpp
 * @brief G_k pair energies, configuration energies, and the block error
 *        budget used to eliminate blocks.
 */

#include <array>
#include <cmath>
#include <cstdlib>
#include <type_traits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbp/geometry.hpp"
#include "tbp/qsqrt3.hpp"
#include "tbp/rational.hpp"

namespace tbp {

struct PotentialTerm {
    int k;
    Rational coeff;
};

/// F = sum a_k G_k with G_k(r) = (4 - r^2)^k.
class Potential {
public:
    Potential() = default;
    explicit Potential(std::vector<PotentialTerm> terms) : terms_(std::move(terms)) {
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].k < 1) throw std::invalid_argument("Potential: k must be positive");
            for (std::size_t j = 0; j < i; ++j)
                if (terms_[i].k == terms_[j].k) throw std::invalid_argument("Potential: repeated k");
        }
        for (const auto& t : terms_) {
            coeff_d_.push_back(t.coeff.get_d());
            if (Rational(coeff_d_.back()) != t.coeff)
                throw std::invalid_argument("Potential: coefficient not exactly representable in binary64");
        }
    }

    static Potential g(int k) { return Potential({{k, Rational(1)}}); }
    static Potential g10_sharp() { return Potential({{10, Rational(1)}, {5, Rational(28)}, {2, Rational(102)}}); }

    /// Parses "g3".."g10", "g10#" / "g10sharp".
    static Potential parse(const std::string& name) {
        if (name == "g10#" || name == "g10sharp" || name == "g10s") return g10_sharp();
        if (name.size() >= 2 && (name[0] == 'g' || name[0] == 'G')) {
            const int k = std::stoi(name.substr(1));
            if (k >= 1 && k <= 64) return g(k);
        }
        throw std::invalid_argument("unknown potential: " + name);
    }

    const std::vector<PotentialTerm>& terms() const { return terms_; }
    int max_k() const {
        int m = 0;
        for (const auto& t : terms_) m = std::max(m, t.k);
        return m;
    }
    bool error_machinery_ok() const {
        for (const auto& t : terms_)
            if (t.k < 2) return false;
        return !terms_.empty();
    }

    /// Exact TBP energy: 3 + 6*2^k per G_k term.
    Rational tbp_energy() const {
        Rational e(0);
        for (const auto& t : terms_) e += t.coeff * (3 + 6 * pow2(t.k));
        return e;
    }

    std::string name() const {
        if (terms_.size() == 1 && terms_[0].coeff == 1) return "g" + std::to_string(terms_[0].k);
        if (*this == g10_sharp()) return "g10#";
        std::string s;
        for (const auto& t : terms_) s += (s.empty() ? "" : "+") + t.coeff.get_str() + "*g" + std::to_string(t.k);
        return s;
    }

    /// F applied to x = 4 - r^2 = 2 + 2 p.q
    template <class Num>
    Num apply(const Num& x) const;

    /// a_i (or |a_i|) as a scalar of type Num.
    template <class Num>
    Num coeff(std::size_t i, bool absolute = false) const {
        if constexpr (std::is_same_v<Num, MachineInterval>)
            return MachineInterval(absolute ? std::fabs(coeff_d_[i]) : coeff_d_[i]);
        else
            return Num(absolute ? rabs(terms_[i].coeff) : terms_[i].coeff);
    }

    friend bool operator==(const Potential& a, const Potential& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].k != b.terms_[i].k || a.terms_[i].coeff != b.terms_[i].coeff) return false;
        return true;
    }

private:
    std::vector<PotentialTerm> terms_;
    std::vector<double> coeff_d_;
};

template <class Num>
Num num_pow(const Num& x, int n) {
    Num r = NumTraits<Num>::dyadic(1, 0);
    for (int i = 0; i < n; ++i) r = r * x;
    return r;
}

template <class Num>
Num Potential::apply(const Num& x) const {
    Num acc = NumTraits<Num>::dyadic(0, 0);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Num p = num_pow(x, terms_[i].k);
        acc = acc + (terms_[i].coeff == 1 ? p : Num(coeff<Num>(i) * p));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Configurations

/// p0 = (x0, 0), p1..p3 planar points, p4 = infinity.
template <class Num>
struct Configuration {
    Num x0;
    std::array<std::array<Num, 2>, 3> p;
};

/// The polar TBP: p0 = (1,0), p1 = (-1/2,-sqrt3/2), p2 = (0,0), p3 = (-1/2, sqrt3/2).
inline Configuration<QSqrt3> polar_tbp() {
    const QSqrt3 half_sqrt3(Rational(0), make_rational(1, 2));
    const QSqrt3 mhalf(make_rational(-1, 2));
    return {QSqrt3(1), {{{mhalf, -half_sqrt3}, {QSqrt3(0), QSqrt3(0)}, {mhalf, half_sqrt3}}}};
}

template <class Num>
std::array<SpherePoint<Num>, 5> sphere_points(const Configuration<Num>& c) {
    const Num zero = NumTraits<Num>::dyadic(0, 0);
    return {stereo_inverse(c.x0, zero), stereo_inverse(c.p[0][0], c.p[0][1]), stereo_inverse(c.p[1][0], c.p[1][1]),
            stereo_inverse(c.p[2][0], c.p[2][1]), north_pole<Num>()};
}

/// (4 - |P - Q|^2)^k = (2 + 2 P.Q)^k on the sphere.
template <class Num>
Num pair_energy(const SpherePoint<Num>& p, const SpherePoint<Num>& q, int k) {
    using T = NumTraits<Num>;
    return num_pow(Num(T::dyadic(2, 0) + T::dyadic(2, 0) * dot(p, q)), k);
}

template <class Num>
Num pair_energy(const SpherePoint<Num>& p, const SpherePoint<Num>& q, const Potential& F) {
    using T = NumTraits<Num>;
    return F.apply(Num(T::dyadic(2, 0) + T::dyadic(2, 0) * dot(p, q)));
}

template <class Num>
Num config_energy(const std::array<SpherePoint<Num>, 5>& pts, const Potential& F) {
    Num e = NumTraits<Num>::dyadic(0, 0);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) e = e + pair_energy(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)], F);
    return e;
}

template <class Num>
Num config_energy(const Configuration<Num>& c, const Potential& F) {
    if constexpr (!std::is_same_v<Num, MachineInterval>) {
        std::array<std::array<Num, 2>, 4> q = {{{c.x0, Num(0)}, c.p[0], c.p[1], c.p[2]}};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (q[static_cast<std::size_t>(i)] == q[static_cast<std::size_t>(j)])
                    throw std::invalid_argument("config_energy: duplicate points");
    }
    return config_energy(sphere_points(c), F);
}

// ---------------------------------------------------------------------------
// Block error budget

template <class Num>
struct BlockErrorBreakdown {
    Num err_total;
    std::array<Num, 4> err_by_index;
};

/// Cell data for the five slots of a good block; slot 4 is infinity.
template <class Num>
std::array<CellData<Num>, 5> block_cells(const DyadicBlock& b) {
    return {cell_data<Num>(b.q0), cell_data<Num>(b.squares[0]), cell_data<Num>(b.squares[1]),
            cell_data<Num>(b.squares[2]), infinity_cell<Num>()};
}

/// epsilon(Q, Q') for G_k, given (Q . Q')_max. Zero when Q is infinity.
template <class Num>
Num epsilon_term(const CellData<Num>& Q, const Num& dot_max, int k) {
    using T = NumTraits<Num>;
    if (Q.is_infinity) return T::dyadic(0, 0);
    if (k < 2) throw std::invalid_argument("epsilon_term: k must be at least 2");
    const Num Tv = T::dyadic(2, 0) + T::dyadic(2, 0) * dot_max;
    const Num Tk2 = num_pow(Tv, k - 2);
    const Num first = T::dyadic(std::int64_t{k} * (k - 1), -1) * Tk2 * Q.metrics.d_sq;
    const Num second = T::dyadic(2 * k, 0) * (Tk2 * Tv) * Q.metrics.delta;
    return first + second;
}

template <class Num>
Num epsilon_term(const CellData<Num>& Q, const CellData<Num>& Qp, int k) {
    if (Q.is_infinity) return NumTraits<Num>::dyadic(0, 0);
    return epsilon_term(Q, dot_product_max(Q, Qp), k);
}

/// ERR_i = sum_j eps(Q_i, Q_j); combos use sum |a_k| ERR_k.
template <class Num>
BlockErrorBreakdown<Num> block_error(const std::array<CellData<Num>, 5>& cells, const Potential& F) {
    using T = NumTraits<Num>;
    if (!F.error_machinery_ok()) throw std::invalid_argument("block_error: every term needs k >= 2");
    BlockErrorBreakdown<Num> out;
    out.err_total = T::dyadic(0, 0);
    for (int i = 0; i < 4; ++i) {
        Num erri = T::dyadic(0, 0);
        for (int j = 0; j < 5; ++j) {
            if (i == j) continue;
            const auto& Qi = cells[static_cast<std::size_t>(i)];
            const Num dm = dot_product_max(Qi, cells[static_cast<std::size_t>(j)]);
            for (std::size_t t = 0; t < F.terms().size(); ++t) {
                const Num e = epsilon_term(Qi, dm, F.terms()[t].k);
                erri = erri + (F.terms().size() == 1 ? e : Num(F.coeff<Num>(t, true) * e));
            }
        }
        out.err_by_index[static_cast<std::size_t>(i)] = erri;
        out.err_total = out.err_total + erri;
    }
    return out;
}

template <class Num>
BlockErrorBreakdown<Num> block_error(const DyadicBlock& b, const Potential& F) {
    if (!b.is_good()) throw BadSquare("block_error: block is not good");
    return block_error(block_cells<Num>(b), F);
}

/// Index of the largest ERR_i (by upper bound), ties to the smaller index.
template <class Num>
int recommend_axis(const BlockErrorBreakdown<Num>& e) {
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (NumTraits<Num>::upper(e.err_by_index[static_cast<std::size_t>(i)]) >
            NumTraits<Num>::upper(e.err_by_index[static_cast<std::size_t>(best)]))
            best = i;
    return best;
}

/// Minimum of F over the 128 vertex configurations, in the fixed lexicographic order.
template <class Num>
Num min_vertex_energy(const std::array<CellData<Num>, 5>& cells, const Potential& F) {
    // pair tables: value[i][j][vi][vj] for slots i < j
    std::array<std::array<std::array<std::array<Num, 4>, 4>, 5>, 5> tab;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int a = 0; a < cells[static_cast<std::size_t>(i)].vertex_count; ++a)
                for (int b = 0; b < cells[static_cast<std::size_t>(j)].vertex_count; ++b)
                    tab[i][j][a][b] = pair_energy(cells[i].vertices[a], cells[j].vertices[b], F);
    bool first = true;
    Num best;
    for (int v0 = 0; v0 < cells[0].vertex_count; ++v0) {
        const Num e04 = tab[0][4][v0][0];
        for (int v1 = 0; v1 < 4; ++v1) {
            const Num e1 = e04 + tab[0][1][v0][v1] + tab[1][4][v1][0];
            for (int v2 = 0; v2 < 4; ++v2) {
                const Num e2 = e1 + tab[0][2][v0][v2] + tab[1][2][v1][v2] + tab[2][4][v2][0];
                for (int v3 = 0; v3 < 4; ++v3) {
                    const Num e3 = e2 + tab[0][3][v0][v3] + tab[1][3][v1][v3] + tab[2][3][v2][v3] + tab[3][4][v3][0];
                    if (first) {
                        best = e3;
                        first = false;
                    } else {
                        if constexpr (std::is_same_v<Num, MachineInterval>)
                            best = min(best, e3);
                        else
                            best = e3 < best ? e3 : best;
                    }
                }
            }
        }
    }
    return best;
}

struct Elimination {
    bool eliminated = false;
    int recommendation = 0;
};

/// True when every configuration in the block has energy above the TBP energy.
template <class Num>
Elimination eliminate_block(const DyadicBlock& b, const Potential& F, const Rational& tbp_energy) {
    const auto cells = block_cells<Num>(b);
    const auto err = block_error(cells, F);
    const Num lower = min_vertex_energy(cells, F) - err.err_total;
    Elimination out;
    out.recommendation = recommend_axis(err);
    if constexpr (std::is_same_v<Num, MachineInterval>)
        out.eliminated = Rational(lower.lo()) > tbp_energy;  // exact comparison
    else
        out.eliminated = lower > tbp_energy;
    return out;
}

}  // namespace tbp
