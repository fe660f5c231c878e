#include <gtest/gtest.h>

#include <random>

#include "tbp/hessian.hpp"
#include "tbp/symbolic.hpp"

using namespace tbp;

namespace {

Rational random_rational(std::mt19937_64& rng) {
    return make_rational(static_cast<long>(rng() % 769) - 384, 256);  // [-3/2, 3/2]
}

// Mixed central difference of E in exact arithmetic.
Rational central_difference(const EnergyExpression& e, std::array<Rational, 7> x, std::array<int, 7> idx, const Rational& h) {
    for (int v = 0; v < 7; ++v) {
        if (idx[v] == 0) continue;
        --idx[v];
        auto xp = x, xm = x;
        xp[v] += h;
        xm[v] -= h;
        return (central_difference(e, xp, idx, h) - central_difference(e, xm, idx, h)) / (2 * h);
    }
    return e.evaluate(x);
}

std::vector<std::array<int, 7>> indices_up_to(int w) {
    std::vector<std::array<int, 7>> out;
    std::array<int, 7> idx{};
    auto rec = [&](auto&& self, int v, int left) -> void {
        if (v == 7) {
            out.push_back(idx);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            idx[v] = k;
            self(self, v + 1, left - k);
        }
        idx[v] = 0;
    };
    rec(rec, 0, w);
    return out;
}

}  // namespace

TEST(Symbolic, PolyArithmetic) {
    const Poly4 x = Poly4::monomial(1, 1, 0, 0, 0), y = Poly4::monomial(1, 0, 1, 0, 0);
    const Poly4 s = (x + y).pow(2);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s - x * x - y * y, Poly4::monomial(2, 1, 1, 0, 0));
    EXPECT_TRUE((s - s).is_zero());
    EXPECT_EQ(s.abs_coeff_sum(), 4);
    EXPECT_EQ(s.derivative(0), Poly4::monomial(2, 1, 0, 0, 0) + Poly4::monomial(2, 0, 1, 0, 0));
}

TEST(Symbolic, FirstPartialOfPointTerm) {
    const auto d = point_term(1).partial(0);
    EXPECT_EQ(d.numerator, Poly4::monomial(8, 1, 0, 0, 0));
    EXPECT_EQ(d.a_exp, 2);
    EXPECT_EQ(d.c_exp, 0);
}

TEST(Symbolic, MixedPartialsCommute) {
    const auto g = pair_term(3);
    const auto ac = g.partial(0).partial(2), ca = g.partial(2).partial(0);
    EXPECT_EQ(ac.numerator, ca.numerator);
    EXPECT_EQ(ac.a_exp, ca.a_exp);
    EXPECT_EQ(ac.c_exp, ca.c_exp);
    const auto bd = g.partial({0, 2, 0, 1}), db = g.partial(3).partial(1).partial(1);
    EXPECT_EQ(bd.numerator, db.numerator);
}

TEST(Symbolic, WeightEightDenominators) {
    std::mt19937_64 rng(11);
    for (int k : {2, 3}) {
        const auto g = pair_term(k);
        for (const auto& idx : multi_indices(8)) {
            const auto p = g.partial(idx);
            EXPECT_LE(p.a_exp, k + 8);
            EXPECT_LE(p.c_exp, k + 8);
            EXPECT_TRUE(p.degree_premise());
        }
        // over the common denominator A^(k+8) C^(k+8) the premise still holds
        const auto p = g.partial({3, 2, 2, 1});
        const auto u = p.lifted(k + 8, k + 8);
        EXPECT_TRUE(u.degree_premise());
        const std::array<Rational, 4> x = {random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng)};
        EXPECT_EQ(p.evaluate(x), u.evaluate(x));
        EXPECT_EQ(g.partial({8, 0, 0, 0}).a_exp, k + 8);
        EXPECT_EQ(g.partial({0, 0, 0, 8}).c_exp, k + 8);
    }
}

TEST(Symbolic, PairTermTendsToPointTerm) {
    // the top (c,d)-degree part of the g numerator is the f numerator times (c^2+d^2)^k
    for (int k = 1; k <= 6; ++k) {
        const auto g = pair_term(k);
        EXPECT_EQ(g.c_exp, k);
        Poly4 top;
        for (const auto& [key, c] : g.numerator.terms())
            if (Poly4::exponent(key, 2) + Poly4::exponent(key, 3) == 2 * k) top = top + Poly4::monomial(c, Poly4::exponent(key, 0), Poly4::exponent(key, 1), Poly4::exponent(key, 2), Poly4::exponent(key, 3));
        const Poly4 v = Poly4::monomial(1, 0, 0, 2, 0) + Poly4::monomial(1, 0, 0, 0, 2);
        EXPECT_EQ(top, point_term(k).numerator * v.pow(k));
        EXPECT_EQ(g.numerator.split_degrees().second, 2 * k);
    }
}

TEST(Symbolic, EnergyAtTbp) {
    const auto p = tbp_point();
    EXPECT_EQ(build_energy_expression(3).evaluate(p), QSqrt3(51));
    const Rational expected[] = {27, 51, 99, 195, 387};
    for (int k = 2; k <= 6; ++k) EXPECT_EQ(build_energy_expression(k).evaluate(p), QSqrt3(expected[k - 2]));
    EXPECT_EQ(build_energy_expression(combo_from_tag("g10#")).evaluate(p), QSqrt3(14361));
}

TEST(Symbolic, GradientVanishesAtTbp) {
    const auto p = tbp_point();
    for (int k : {2, 3, 6}) {
        const auto e = build_energy_expression(k);
        for (int v = 0; v < 7; ++v) {
            std::array<int, 7> idx{};
            idx[v] = 1;
            EXPECT_EQ(partial_derivative(e, idx).evaluate(p), QSqrt3(0)) << "k=" << k << " var " << v;
        }
    }
}

TEST(Symbolic, AgreesWithJetsAtTbp) {
    const auto p = tbp_point();
    for (int k : {2, 4}) {
        const auto e = build_energy_expression(k);
        const LocalPartials jets({{k, Rational(1)}}, 3);
        for (const auto& idx : indices_up_to(3)) EXPECT_EQ(partial_derivative(e, idx).evaluate(p), jets.at(idx));
    }
}

TEST(Symbolic, FiniteDifferenceCrossCheck) {
    std::mt19937_64 rng(12);
    const Rational h = Rational(1) / pow2(16);
    const auto idxs = indices_up_to(3);
    ASSERT_EQ(idxs.size(), 120u);  // all weights 0..3 in seven variables
    int bad = 0;
    for (int k : {3, 6}) {
        const auto e = build_energy_expression(k);
        for (int n = 0; n < 20; ++n) {
            std::array<Rational, 7> x;
            for (auto& v : x) v = random_rational(rng);
            for (const auto& idx : idxs) {
                const double sym = partial_derivative(e, idx).evaluate(x).get_d();
                const double fd = central_difference(e, x, idx, h).get_d();
                if (std::fabs(sym - fd) > 1e-6 * std::max(1.0, std::fabs(sym))) ++bad;
            }
        }
    }
    EXPECT_EQ(bad, 0);
}
