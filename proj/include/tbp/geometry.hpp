#pragma once

/**
 * @file geometry.hpp
 * @brief Stereographic projection, integer-coded dyadic cells, and the
 *        per-cell spherical estimates used by the energy bound.
 *
 * A dyadic cell of side 2^-k with center c is stored as (S*c, k) where
 * S = 2^scale_log2. The root segment [0,4] is (2S, -2) and the root square
 * [-2,2]^2 is (0, 0, -2). Every vertex coordinate is therefore an integer
 * multiple of 1/S and is exactly representable as a double.
 *
 * All estimates are written once as templates over the scalar type and are
 * instantiated with Rational (exact) and MachineInterval (search hot path).
 */

#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tbp/interval.hpp"
#include "tbp/rational.hpp"

namespace tbp {

class ScaleExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadSquare : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Scalar traits

template <class Num>
struct NumTraits;

template <>
struct NumTraits<Rational> {
    static Rational dyadic(std::int64_t v, int e) {
        Rational r(static_cast<long>(v));
        return r * pow2(e);
    }
    static Rational maximum(const Rational& a, const Rational& b) { return a < b ? b : a; }
    static Rational upper(const Rational& a) { return a; }
};

template <>
struct NumTraits<MachineInterval> {
    static MachineInterval dyadic(std::int64_t v, int e) {
        return MachineInterval(std::ldexp(static_cast<double>(v), e));
    }
    static MachineInterval maximum(const MachineInterval& a, const MachineInterval& b) { return max(a, b); }
    static double upper(const MachineInterval& a) { return a.hi(); }
};

// ---------------------------------------------------------------------------
// Dyadic cells

inline std::int64_t scaled_half_side(int depth, int scale_log2) {
    const int e = scale_log2 - depth - 1;
    if (e < 0 || e > 62) throw ScaleExhausted("cell too small for integer coding");
    return std::int64_t{1} << e;
}

struct DyadicSegment {
    std::int64_t scaled_center = 0;
    std::int8_t depth = -2;
    std::int8_t scale_log2 = 25;

    static DyadicSegment root(int scale_log2) {
        return {std::int64_t{2} << scale_log2, -2, static_cast<std::int8_t>(scale_log2)};
    }
    std::int64_t half() const { return scaled_half_side(depth, scale_log2); }
    std::int64_t lo() const { return scaled_center - half(); }
    std::int64_t hi() const { return scaled_center + half(); }
    Rational side() const { return pow2(-depth); }

    friend bool operator==(const DyadicSegment&, const DyadicSegment&) = default;
};

struct DyadicSquare {
    std::int64_t scaled_center_x = 0;
    std::int64_t scaled_center_y = 0;
    std::int8_t depth = -2;
    std::int8_t scale_log2 = 25;

    static DyadicSquare root(int scale_log2) { return {0, 0, -2, static_cast<std::int8_t>(scale_log2)}; }
    std::int64_t half() const { return scaled_half_side(depth, scale_log2); }
    std::int64_t x_lo() const { return scaled_center_x - half(); }
    std::int64_t x_hi() const { return scaled_center_x + half(); }
    std::int64_t y_lo() const { return scaled_center_y - half(); }
    std::int64_t y_hi() const { return scaled_center_y + half(); }
    Rational side() const { return pow2(-depth); }

    /// Side at most 1/2 and contained in [-3/2,3/2]^2.
    bool is_good() const {
        if (depth < 1) return false;
        const std::int64_t lim = std::int64_t{3} << (scale_log2 - 1);
        return x_lo() >= -lim && x_hi() <= lim && y_lo() >= -lim && y_hi() <= lim;
    }

    friend bool operator==(const DyadicSquare&, const DyadicSquare&) = default;
};

struct DyadicBlock {
    DyadicSegment q0;
    std::array<DyadicSquare, 3> squares;  // Q1, Q2, Q3

    static DyadicBlock root(int scale_log2) {
        const auto sq = DyadicSquare::root(scale_log2);
        return {DyadicSegment::root(scale_log2), {sq, sq, sq}};
    }
    const DyadicSquare& square(int i) const { return squares[static_cast<std::size_t>(i - 1)]; }
    int scale_log2() const { return q0.scale_log2; }
    bool is_good() const { return squares[0].is_good() && squares[1].is_good() && squares[2].is_good(); }

    friend bool operator==(const DyadicBlock&, const DyadicBlock&) = default;
};

/// Quarter-side offset of the children of a cell at the given depth.
inline std::int64_t child_offset(int depth, int scale_log2) {
    const int e = scale_log2 - depth - 2;
    if (e < 0) throw ScaleExhausted("scale exhausted: child centers are no longer integers");
    return std::int64_t{1} << e;
}

/// The two halves of a segment, lower first.
inline std::array<DyadicSegment, 2> subdivide(const DyadicSegment& s) {
    const std::int64_t o = child_offset(s.depth, s.scale_log2);
    const auto d = static_cast<std::int8_t>(s.depth + 1);
    return {{{s.scaled_center - o, d, s.scale_log2}, {s.scaled_center + o, d, s.scale_log2}}};
}

/// The four quarters of a square: (-,-), (+,-), (-,+), (+,+).
inline std::array<DyadicSquare, 4> subdivide(const DyadicSquare& q) {
    const std::int64_t o = child_offset(q.depth, q.scale_log2);
    const auto d = static_cast<std::int8_t>(q.depth + 1);
    const auto x = q.scaled_center_x, y = q.scaled_center_y;
    return {{{x - o, y - o, d, q.scale_log2},
             {x + o, y - o, d, q.scale_log2},
             {x - o, y + o, d, q.scale_log2},
             {x + o, y + o, d, q.scale_log2}}};
}

// ---------------------------------------------------------------------------
// Text codes: "k0 c0 | k1 x1 y1 | k2 x2 y2 | k3 x3 y3"

inline std::string block_code(const DyadicBlock& b) {
    std::ostringstream os;
    os << int(b.q0.depth) << ' ' << b.q0.scaled_center;
    for (const auto& q : b.squares) os << " | " << int(q.depth) << ' ' << q.scaled_center_x << ' ' << q.scaled_center_y;
    return os.str();
}

inline DyadicBlock parse_block_code(const std::string& code, int scale_log2) {
    std::string cleaned = code;
    for (auto& ch : cleaned)
        if (ch == '|') ch = ' ';
    std::istringstream is(cleaned);
    long long v[11];
    for (auto& x : v)
        if (!(is >> x)) throw std::invalid_argument("malformed block code: " + code);
    std::string rest;
    if (is >> rest) throw std::invalid_argument("trailing data in block code: " + code);
    const auto s = static_cast<std::int8_t>(scale_log2);
    DyadicBlock b;
    b.q0 = {v[1], static_cast<std::int8_t>(v[0]), s};
    for (int i = 0; i < 3; ++i)
        b.squares[static_cast<std::size_t>(i)] = {v[3 * i + 3], v[3 * i + 4], static_cast<std::int8_t>(v[3 * i + 2]), s};
    // Validate that the cells are dyadic cells of the root.
    auto check = [&](std::int64_t c, int depth, std::int64_t root_center) {
        if (depth < -2 || depth > scale_log2 - 1) throw std::invalid_argument("bad depth in block code: " + code);
        const std::int64_t h = scaled_half_side(depth, scale_log2);
        // centers sit at root_lo + odd multiples of h
        const std::int64_t root_lo = root_center - (std::int64_t{2} << scale_log2);
        const std::int64_t off = c - root_lo;
        if (off <= 0 || off >= (std::int64_t{4} << scale_log2) || (off / h) % 2 != 1 || off % h != 0)
            throw std::invalid_argument("cell is not dyadic in block code: " + code);
    };
    check(b.q0.scaled_center, b.q0.depth, std::int64_t{2} << scale_log2);
    for (const auto& q : b.squares) {
        check(q.scaled_center_x, q.depth, 0);
        check(q.scaled_center_y, q.depth, 0);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Sphere points

template <class Num>
struct SpherePoint {
    Num x, y, z;
};

template <class Num>
Num dot(const SpherePoint<Num>& a, const SpherePoint<Num>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class Num>
Num dist_sq(const SpherePoint<Num>& a, const SpherePoint<Num>& b) {
    const Num dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

/// Inverse stereographic projection (2x, 2y, x^2+y^2-1) / (1+x^2+y^2).
template <class Num>
SpherePoint<Num> stereo_inverse(const Num& x, const Num& y) {
    using T = NumTraits<Num>;
    const Num one = T::dyadic(1, 0), two = T::dyadic(2, 0);
    const Num r2 = x * x + y * y;
    const Num den = one + r2;
    return {Num(two * x / den), Num(two * y / den), Num(one - two / den)};
}

/// The image of the point at infinity, the north pole.
template <class Num>
SpherePoint<Num> north_pole() {
    using T = NumTraits<Num>;
    return {T::dyadic(0, 0), T::dyadic(0, 0), T::dyadic(1, 0)};
}

// ---------------------------------------------------------------------------
// Cell estimates

/// chi(D, d) = d^2/(4D) + d^4/(2D^3), written in terms of d^2. D in {1, 2}.
template <class Num>
Num chi(int D, const Num& d_sq) {
    using T = NumTraits<Num>;
    if (D == 1) return d_sq * T::dyadic(1, -2) + d_sq * d_sq * T::dyadic(1, -1);
    if (D == 2) return d_sq * T::dyadic(1, -3) + d_sq * d_sq * T::dyadic(1, -4);
    throw std::invalid_argument("chi: D must be 1 or 2");
}

/// Squared spherical diameter of the image of a planar disk of radius r centered R from the origin.
template <class Num>
Num disk_diameter_sq(const Num& r_sq, const Num& R_sq) {
    using T = NumTraits<Num>;
    const Num diff = R_sq - r_sq;
    const Num den = T::dyadic(1, 0) + T::dyadic(2, 0) * r_sq + T::dyadic(2, 0) * R_sq + diff * diff;
    return T::dyadic(16, 0) * r_sq / den;
}

template <class Num>
struct SquareMetrics {
    Num d_sq;   // squared diameter of the vertex set on the sphere
    Num d1_sq;  // squared longest edge
    Num d2_sq;  // squared circular measure
    Num delta;  // hull separation constant
};

/// Vertices on the sphere plus metrics. Infinity has one vertex and zero metrics.
template <class Num>
struct CellData {
    std::array<SpherePoint<Num>, 4> vertices;
    int vertex_count = 0;
    bool is_infinity = false;
    SquareMetrics<Num> metrics;
};

template <class Num>
CellData<Num> cell_data(const DyadicSegment& s) {
    using T = NumTraits<Num>;
    const int e = -s.scale_log2;
    CellData<Num> c;
    const Num zero = T::dyadic(0, 0);
    c.vertices[0] = stereo_inverse(T::dyadic(s.lo(), e), zero);
    c.vertices[1] = stereo_inverse(T::dyadic(s.hi(), e), zero);
    c.vertex_count = 2;
    const Num r = T::dyadic(s.half(), e), R = T::dyadic(s.scaled_center, e);
    c.metrics.d_sq = dist_sq(c.vertices[0], c.vertices[1]);
    c.metrics.d1_sq = c.metrics.d_sq;
    c.metrics.d2_sq = disk_diameter_sq(Num(r * r), Num(R * R));
    c.metrics.delta = chi(2, c.metrics.d2_sq);
    return c;
}

template <class Num>
CellData<Num> cell_data(const DyadicSquare& q) {
    using T = NumTraits<Num>;
    if (!q.is_good()) throw BadSquare("metrics-on-bad-square");
    const int e = -q.scale_log2;
    CellData<Num> c;
    const Num xl = T::dyadic(q.x_lo(), e), xh = T::dyadic(q.x_hi(), e);
    const Num yl = T::dyadic(q.y_lo(), e), yh = T::dyadic(q.y_hi(), e);
    // counter-clockwise: 0-1-2-3 are consecutive around the square
    c.vertices[0] = stereo_inverse(xl, yl);
    c.vertices[1] = stereo_inverse(xh, yl);
    c.vertices[2] = stereo_inverse(xh, yh);
    c.vertices[3] = stereo_inverse(xl, yh);
    c.vertex_count = 4;
    const auto& v = c.vertices;
    const Num e01 = dist_sq(v[0], v[1]), e12 = dist_sq(v[1], v[2]);
    const Num e23 = dist_sq(v[2], v[3]), e30 = dist_sq(v[3], v[0]);
    const Num d02 = dist_sq(v[0], v[2]), d13 = dist_sq(v[1], v[3]);
    c.metrics.d1_sq = T::maximum(T::maximum(e01, e12), T::maximum(e23, e30));
    c.metrics.d_sq = T::maximum(c.metrics.d1_sq, T::maximum(d02, d13));
    const Num h = T::dyadic(q.half(), e);
    const Num cx = T::dyadic(q.scaled_center_x, e), cy = T::dyadic(q.scaled_center_y, e);
    const Num r_sq = T::dyadic(2, 0) * h * h;
    const Num R_sq = cx * cx + cy * cy;
    c.metrics.d2_sq = disk_diameter_sq(r_sq, R_sq);
    c.metrics.delta = T::maximum(chi(1, c.metrics.d1_sq), chi(2, c.metrics.d2_sq));
    return c;
}

template <class Num>
CellData<Num> infinity_cell() {
    using T = NumTraits<Num>;
    CellData<Num> c;
    c.vertices[0] = north_pole<Num>();
    c.vertex_count = 1;
    c.is_infinity = true;
    const Num zero = T::dyadic(0, 0);
    c.metrics = {zero, zero, zero, zero};
    return c;
}

template <class Num>
SquareMetrics<Num> square_metrics(const DyadicSquare& q) {
    return cell_data<Num>(q).metrics;
}

template <class Num>
SquareMetrics<Num> square_metrics(const DyadicSegment& s) {
    return cell_data<Num>(s).metrics;
}

/// Upper bound for V . V' over patches, hulls and connectors of the two cells.
template <class Num>
Num dot_product_max(const CellData<Num>& a, const CellData<Num>& b) {
    using T = NumTraits<Num>;
    if (a.is_infinity && b.is_infinity) throw std::invalid_argument("dot_product_max: both cells are infinity");
    Num best = dot(a.vertices[0], b.vertices[0]);
    for (int i = 0; i < a.vertex_count; ++i)
        for (int j = 0; j < b.vertex_count; ++j)
            if (i || j) best = T::maximum(best, dot(a.vertices[static_cast<std::size_t>(i)], b.vertices[static_cast<std::size_t>(j)]));
    if (a.is_infinity || b.is_infinity) return best;
    const Num& da = a.metrics.delta;
    const Num& db = b.metrics.delta;
    return best + da + db + da * db;
}

}  // namespace tbp
