#pragma once

#include "poly.hpp"

namespace pnsurf {

// Quotient of bivariate polynomials. No automatic gcd reduction: products
// of the degrees seen downstream make full multivariate gcd far too slow,
// and the grid-evaluation identity checks never need reduced form.
// Normalization keeps the denominator's lex-leading coefficient positive.
class RatFn {
public:
    RatFn() : num_(), den_(Rational(1)) {}
    explicit RatFn(const BivariatePoly& p) : num_(p), den_(Rational(1)) {}
    RatFn(BivariatePoly num, BivariatePoly den);

    static RatFn constant(const Rational& c) { return RatFn(BivariatePoly(c)); }

    const BivariatePoly& num() const { return num_; }
    const BivariatePoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RatFn operator-() const;
    friend RatFn operator+(const RatFn& a, const RatFn& b);
    friend RatFn operator-(const RatFn& a, const RatFn& b);
    friend RatFn operator*(const RatFn& a, const RatFn& b);
    friend RatFn operator/(const RatFn& a, const RatFn& b);
    friend RatFn operator*(const Rational& s, const RatFn& a);

    // Equality as rational functions (cross-multiplied polynomial identity).
    bool equals(const RatFn& o) const { return num_ * o.den_ == o.num_ * den_; }

    RatFn diff_u() const;
    RatFn diff_v() const;

    // Throws ErrorCode::pole_eval when the denominator vanishes.
    Rational eval(const Rational& u, const Rational& v) const;
    double eval_double(double u, double v) const;

    // Optional reduction pass: strips the common monomial factor and the
    // rational content, and collapses to a polynomial when the denominator
    // divides the numerator exactly. Not a full multivariate gcd.
    RatFn reduced() const;

private:
    void normalize_sign();
    BivariatePoly num_, den_;
};

struct RatFnVec3 {
    RatFn x, y, z;

    const RatFn& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    RatFn& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    RatFnVec3 diff_u() const { return {x.diff_u(), y.diff_u(), z.diff_u()}; }
    RatFnVec3 diff_v() const { return {x.diff_v(), y.diff_v(), z.diff_v()}; }
    Vec3Q eval(const Rational& u, const Rational& v) const {
        return {x.eval(u, v), y.eval(u, v), z.eval(u, v)};
    }
};

inline RatFn dot(const RatFnVec3& a, const RatFnVec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline RatFnVec3 cross(const RatFnVec3& a, const RatFnVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

} // namespace pnsurf
