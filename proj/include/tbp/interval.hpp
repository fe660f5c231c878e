#pragma once

/**
 * @file interval.hpp
 * @brief Outward-rounded interval arithmetic on binary64 endpoints.
 *
 * Rounding is done by stepping each endpoint one representable value
 * outward (integer increment/decrement of the IEEE bit pattern) after the
 * four endpoint combinations have been evaluated in round-to-nearest.
 * Every operation first checks magnitude guards; a violation throws
 * RigorAbort and the enclosing computation must be discarded.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tbp {

/// Raised when a rigorous computation cannot guarantee its result.
class RigorAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline constexpr double kAddGuard = 1099511627776.0;  // 2^40
inline constexpr double kSmallGuard = 1024.0;         // 2^10
inline constexpr double kTinyGuard = 1.0 / 1024.0;    // 2^-10
inline constexpr double kRangeCutoff = 1125899906842624.0;  // 2^50
}  // namespace detail

/// Next double above x in the real ordering. Crosses zero through the subnormals.
inline double step_up(double x) {
    if (x == 0.0) return std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(x);
    bits = (x > 0.0) ? bits + 1 : bits - 1;
    return std::bit_cast<double>(bits);
}

/// Next double below x in the real ordering.
inline double step_down(double x) {
    if (x == 0.0) return -std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(x);
    bits = (x > 0.0) ? bits - 1 : bits + 1;
    return std::bit_cast<double>(bits);
}

class MachineInterval {
public:
    constexpr MachineInterval() = default;

    /// Degenerate interval. The value must already be a double; no rounding happens.
    explicit MachineInterval(double v) : MachineInterval(v, v) {}

    MachineInterval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi) ||
            std::max(std::fabs(lo), std::fabs(hi)) > detail::kRangeCutoff) {
            throw RigorAbort("invalid interval [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
        }
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double magnitude() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
    double mignitude() const {
        if (contains(0.0)) return 0.0;
        return std::min(std::fabs(lo_), std::fabs(hi_));
    }
    double width() const { return hi_ - lo_; }
    bool contains(double v) const { return lo_ <= v && v <= hi_; }
    bool contains(const MachineInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

    /// True when every point of *this is strictly below every point of o.
    bool certainly_less(const MachineInterval& o) const { return hi_ < o.lo_; }

    friend MachineInterval operator+(const MachineInterval& a, const MachineInterval& b) {
        if (std::max(a.magnitude(), b.magnitude()) > detail::kAddGuard)
            throw RigorAbort("add guard violated");
        return round_out(a.lo_ + b.lo_, a.hi_ + b.hi_);
    }

    friend MachineInterval operator-(const MachineInterval& a, const MachineInterval& b) {
        if (std::max(a.magnitude(), b.magnitude()) > detail::kAddGuard)
            throw RigorAbort("sub guard violated");
        return round_out(a.lo_ - b.hi_, a.hi_ - b.lo_);
    }

    friend MachineInterval operator*(const MachineInterval& a, const MachineInterval& b) {
        const double ma = a.magnitude(), mb = b.magnitude();
        const bool ok = (ma <= detail::kAddGuard && mb <= detail::kSmallGuard) ||
                        (ma <= detail::kSmallGuard && mb <= detail::kAddGuard);
        if (!ok) throw RigorAbort("mul guard violated");
        const double p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_;
        const double p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        return round_out(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
    }

    friend MachineInterval operator/(const MachineInterval& a, const MachineInterval& b) {
        if (b.contains(0.0)) throw RigorAbort("division by interval containing zero");
        if (a.magnitude() > detail::kAddGuard || b.magnitude() > detail::kSmallGuard ||
            b.mignitude() < detail::kTinyGuard)
            throw RigorAbort("div guard violated");
        const double p1 = a.lo_ / b.lo_, p2 = a.lo_ / b.hi_;
        const double p3 = a.hi_ / b.lo_, p4 = a.hi_ / b.hi_;
        return round_out(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
    }

    MachineInterval operator-() const { return MachineInterval(-hi_, -lo_); }

    MachineInterval& operator+=(const MachineInterval& o) { return *this = *this + o; }
    MachineInterval& operator-=(const MachineInterval& o) { return *this = *this - o; }
    MachineInterval& operator*=(const MachineInterval& o) { return *this = *this * o; }

    friend std::ostream& operator<<(std::ostream& os, const MachineInterval& x) {
        return os << '[' << x.lo_ << ", " << x.hi_ << ']';
    }

private:
    static MachineInterval round_out(double lo, double hi) {
        return MachineInterval(step_down(lo), step_up(hi));
    }

    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// Interval hull of the pointwise maximum; a sound enclosure of max(x, y).
inline MachineInterval max(const MachineInterval& a, const MachineInterval& b) {
    return MachineInterval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

inline MachineInterval min(const MachineInterval& a, const MachineInterval& b) {
    return MachineInterval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

/// x^n by repeated multiplication (n >= 1).
inline MachineInterval pow(const MachineInterval& x, int n) {
    MachineInterval r = x;
    for (int i = 1; i < n; ++i) r = r * x;
    return r;
}

}  // namespace tbp
