#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace pnsurf {

// Exponent pair of a monomial u^i v^j. Map order is plain lexicographic
// (i, then j); graded-lex is computed on demand where needed.
struct Mono {
    int u = 0;
    int v = 0;
    auto operator<=>(const Mono&) const = default;
};

// Sparse exact bivariate polynomial over Rational. No zero coefficients
// are ever stored; the zero polynomial has an empty term map and reports
// bidegree (-1,-1).
class BivariatePoly {
public:
    BivariatePoly() = default;
    explicit BivariatePoly(const Rational& c) {
        if (c != 0) terms_[{0, 0}] = c;
    }
    explicit BivariatePoly(long c) : BivariatePoly(Rational(c)) {}

    static BivariatePoly monomial(Mono m, const Rational& c) {
        BivariatePoly p;
        if (c != 0) p.terms_[m] = c;
        return p;
    }
    static BivariatePoly var_u() { return monomial({1, 0}, 1); }
    static BivariatePoly var_v() { return monomial({0, 1}, 1); }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Mono, Rational>& terms() const { return terms_; }

    // (-1,-1) for the zero polynomial.
    std::pair<int, int> bidegree() const;
    int total_degree() const;

    Rational coeff(int i, int j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    void set_coeff(int i, int j, const Rational& c) {
        if (c == 0)
            terms_.erase({i, j});
        else
            terms_[{i, j}] = c;
    }

    BivariatePoly& operator+=(const BivariatePoly& o);
    BivariatePoly& operator-=(const BivariatePoly& o);
    BivariatePoly operator-() const;
    BivariatePoly& operator*=(const Rational& s);

    friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
    friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) { return a -= b; }
    friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b);
    friend BivariatePoly operator*(const Rational& s, BivariatePoly p) { return p *= s; }

    bool operator==(const BivariatePoly& o) const { return terms_ == o.terms_; }

    BivariatePoly diff_u() const;
    BivariatePoly diff_v() const;
    // Formal antiderivatives with zero integration constant.
    BivariatePoly integrate_u() const;
    BivariatePoly integrate_v() const;

    Rational eval(const Rational& u, const Rational& v) const;
    double eval_double(double u, double v) const;
    // Substitute u = u0, leaving a polynomial in v (exponents stay in .v).
    BivariatePoly eval_partial_u(const Rational& u0) const;
    BivariatePoly eval_partial_v(const Rational& v0) const;

    // Leading monomial in graded-lex order (total degree, then u-exponent).
    Mono leading_mono_grlex() const;
    // Coefficient of the lexicographically largest exponent pair.
    Rational leading_coeff_lex() const;

    // Exact division: returns the quotient iff *this = q * divisor exactly.
    std::optional<BivariatePoly> divide_exact(const BivariatePoly& divisor) const;
    // Exact polynomial square root, if one exists.
    std::optional<BivariatePoly> sqrt() const;

private:
    std::map<Mono, Rational> terms_;
};

// 3-vector of polynomials; carries point/normal/tangent fields before any
// denominators enter the picture.
struct PolyVec3 {
    BivariatePoly x, y, z;

    const BivariatePoly& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    BivariatePoly& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    PolyVec3 diff_u() const { return {x.diff_u(), y.diff_u(), z.diff_u()}; }
    PolyVec3 diff_v() const { return {x.diff_v(), y.diff_v(), z.diff_v()}; }

    Vec3Q eval(const Rational& u, const Rational& v) const {
        return {x.eval(u, v), y.eval(u, v), z.eval(u, v)};
    }

    bool operator==(const PolyVec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline PolyVec3 operator+(const PolyVec3& a, const PolyVec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline PolyVec3 operator-(const PolyVec3& a, const PolyVec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline PolyVec3 operator*(const BivariatePoly& s, const PolyVec3& a) {
    return {s * a.x, s * a.y, s * a.z};
}
inline PolyVec3 operator*(const Rational& s, const PolyVec3& a) {
    return {s * a.x, s * a.y, s * a.z};
}

inline BivariatePoly dot(const PolyVec3& a, const PolyVec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline PolyVec3 cross(const PolyVec3& a, const PolyVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

} // namespace pnsurf
