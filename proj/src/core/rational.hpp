#pragma once

#include <gmpxx.h>

#include <cmath>

#include <array>
#include <optional>
#include <string>

#include "errors.hpp"

namespace pnsurf {

// Arbitrary-precision rational scalar. mpq_class keeps values canonical
// (positive denominator, reduced) after every arithmetic operation, which
// is exactly the invariant we need for the exact pipeline.
using Rational = mpq_class;

// Parses "p/q", integer, or decimal/scientific literals. Decimals are
// rationalized by place value ("0.1" -> 1/10), never by nearest-double.
Rational parse_rational(const std::string& text);

// "p" when the denominator is 1, "p/q" otherwise.
std::string rational_to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sgn(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

// mpq_class(n, d) does not reduce; this does.
inline Rational frac(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Exact square root when q is a perfect square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);

// Best rational approximation p/q of x with |x - p/q| <= tol
// (continued-fraction convergents).
Rational rationalize(double x, double tol);

// ---------------------------------------------------------------------------
// Small exact vectors / matrices

struct Vec3Q {
    Rational x, y, z;

    Vec3Q() : x(0), y(0), z(0) {}
    Vec3Q(Rational xx, Rational yy, Rational zz)
        : x(std::move(xx)), y(std::move(yy)), z(std::move(zz)) {}

    const Rational& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    Rational& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    bool operator==(const Vec3Q& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator!=(const Vec3Q& o) const { return !(*this == o); }
};

inline Vec3Q operator+(const Vec3Q& a, const Vec3Q& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3Q operator-(const Vec3Q& a, const Vec3Q& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3Q operator*(const Rational& s, const Vec3Q& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3Q operator-(const Vec3Q& a) { return {-a.x, -a.y, -a.z}; }

inline Rational dot(const Vec3Q& a, const Vec3Q& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3Q cross(const Vec3Q& a, const Vec3Q& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Rational norm2(const Vec3Q& a) { return dot(a, a); }
inline bool is_zero(const Vec3Q& a) { return a.x == 0 && a.y == 0 && a.z == 0; }

// Rows-major exact 3x3 matrix.
using Mat3Q = std::array<Vec3Q, 3>;

struct Vec3d {
    double x = 0, y = 0, z = 0;
};

inline Vec3d operator+(const Vec3d& a, const Vec3d& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3d operator-(const Vec3d& a, const Vec3d& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3d operator*(double s, const Vec3d& a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(const Vec3d& a, const Vec3d& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3d cross(const Vec3d& a, const Vec3d& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }

inline Vec3d to_double(const Vec3Q& a) { return {to_double(a.x), to_double(a.y), to_double(a.z)}; }

} // namespace pnsurf
