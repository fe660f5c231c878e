#pragma once

/**
 * @file jet.hpp
 * @brief Truncated multivariate Taylor polynomials (jets) with exact coefficients.
 */

#include <array>
#include <memory>
#include <stdexcept>
#include <vector>

namespace tbp {

/// Monomials of total degree <= D in n variables, plus a product table.
class JetSpace {
public:
    JetSpace(int nvars, int degree) : n_(nvars), d_(degree) {
        std::vector<int> e(static_cast<std::size_t>(n_), 0);
        enumerate(e, 0, 0);
        for (std::size_t i = 0; i < exps_.size(); ++i)
            for (std::size_t j = 0; j < exps_.size(); ++j) {
                if (deg_[i] + deg_[j] > d_) continue;
                std::vector<int> s(static_cast<std::size_t>(n_));
                for (int v = 0; v < n_; ++v) s[v] = exps_[i][v] + exps_[j][v];
                products_.push_back({static_cast<int>(i), static_cast<int>(j), index_of(s)});
            }
    }

    int nvars() const { return n_; }
    int degree() const { return d_; }
    std::size_t size() const { return exps_.size(); }
    const std::vector<int>& exponents(std::size_t i) const { return exps_[i]; }
    int total_degree(std::size_t i) const { return deg_[i]; }

    int index_of(const std::vector<int>& e) const {
        for (std::size_t i = 0; i < exps_.size(); ++i)
            if (exps_[i] == e) return static_cast<int>(i);
        throw std::out_of_range("JetSpace: monomial not present");
    }

    struct Product {
        int i, j, out;
    };
    const std::vector<Product>& products() const { return products_; }

private:
    void enumerate(std::vector<int>& e, int v, int used) {
        if (v == n_) {
            exps_.push_back(e);
            deg_.push_back(used);
            return;
        }
        for (int k = 0; used + k <= d_; ++k) {
            e[static_cast<std::size_t>(v)] = k;
            enumerate(e, v + 1, used + k);
        }
        e[static_cast<std::size_t>(v)] = 0;
    }
    int n_, d_;
    std::vector<std::vector<int>> exps_;
    std::vector<int> deg_;
    std::vector<Product> products_;
};

/// Jet of a function at a base point: coefficient c_I of dx^I for |I| <= D.
template <class Num>
class Jet {
public:
    explicit Jet(std::shared_ptr<const JetSpace> sp) : sp_(std::move(sp)), c_(sp_->size(), Num(0)) {}

    static Jet constant(std::shared_ptr<const JetSpace> sp, const Num& v) {
        Jet j(std::move(sp));
        j.c_[0] = v;
        return j;
    }
    /// x_var = base + dx_var
    static Jet variable(std::shared_ptr<const JetSpace> sp, int var, const Num& base) {
        Jet j = constant(sp, base);
        if (sp->degree() >= 1) {
            std::vector<int> e(static_cast<std::size_t>(sp->nvars()), 0);
            e[static_cast<std::size_t>(var)] = 1;
            j.c_[static_cast<std::size_t>(sp->index_of(e))] = Num(1);
        }
        return j;
    }

    const JetSpace& space() const { return *sp_; }
    const Num& coeff(std::size_t i) const { return c_[i]; }
    const Num& value() const { return c_[0]; }

    friend Jet operator+(const Jet& x, const Jet& y) {
        Jet r = x;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] + y.c_[i];
        return r;
    }
    friend Jet operator-(const Jet& x, const Jet& y) {
        Jet r = x;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] - y.c_[i];
        return r;
    }
    friend Jet operator*(const Jet& x, const Jet& y) {
        Jet r(x.sp_);
        for (const auto& p : x.sp_->products()) {
            const auto& a = x.c_[static_cast<std::size_t>(p.i)];
            const auto& b = y.c_[static_cast<std::size_t>(p.j)];
            if (is_zero(a) || is_zero(b)) continue;
            r.c_[static_cast<std::size_t>(p.out)] = r.c_[static_cast<std::size_t>(p.out)] + a * b;
        }
        return r;
    }
    friend Jet operator*(const Num& s, const Jet& x) {
        Jet r = x;
        for (auto& v : r.c_) v = s * v;
        return r;
    }

    Jet pow(int n) const {
        Jet r = constant(sp_, Num(1)), base = *this;
        while (n > 0) {
            if (n & 1) r = r * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return r;
    }

    /// 1/x via the geometric series in the non-constant part.
    Jet reciprocal() const {
        if (is_zero(c_[0])) throw std::domain_error("Jet: reciprocal of a jet vanishing at the base point");
        const Num inv = Num(1) / c_[0];
        Jet h = inv * *this;
        h.c_[0] = Num(0);  // h = x/x0 - 1
        Jet r = constant(sp_, Num(1)), term = constant(sp_, Num(1));
        for (int i = 1; i <= sp_->degree(); ++i) {
            term = term * h;
            r = (i % 2) ? r - term : r + term;
        }
        return inv * r;
    }

private:
    static bool is_zero(const Num& v) { return v == Num(0); }
    std::shared_ptr<const JetSpace> sp_;
    std::vector<Num> c_;
};

}  // namespace tbp
