#include "dualspace.hpp"

#include <cmath>

namespace pnsurf {

Vec3Q exact_unit_normal(const Vec3Q& n_raw) {
    if (is_zero(n_raw)) throw Error(ErrorCode::zero_normal, "zero normal vector");
    if (auto len = rational_sqrt(norm2(n_raw))) {
        Rational inv = 1 / *len;
        return inv * n_raw;
    }
    // irrational norm: snap through stereographic coordinates so the result
    // is still exactly unit
    Vec3d nf = to_double(n_raw);
    double len = norm(nf);
    nf = (1.0 / len) * nf;
    if (nf.z >= 1.0 - 1e-12)
        throw Error(ErrorCode::north_pole, "normal too close to (0,0,1) for exact snapping");
    double s = 1.0 - nf.z;
    Rational y1 = rationalize(nf.x / s, 1e-16);
    Rational y2 = rationalize(nf.y / s, 1e-16);
    Rational w = 1 + y1 * y1 + y2 * y2;
    return {2 * y1 / w, 2 * y2 / w, (y1 * y1 + y2 * y2 - 1) / w};
}

TangentPlane support_value(const Vec3Q& p, const Vec3Q& n_raw) {
    Vec3Q n = exact_unit_normal(n_raw);
    return {n, dot(p, n)};
}

BlaschkePoint to_blaschke(const TangentPlane& t) {
    return {t.normal.x, t.normal.y, t.normal.z, t.h};
}

IsoPoint blaschke_to_isotropic(const BlaschkePoint& b) {
    if (b.x3 == 1)
        throw Error(ErrorCode::north_pole,
                    "tangent plane with normal (0,0,1) has no isotropic image");
    Rational s = 1 / (1 - b.x3);
    return {s * b.x1, s * b.x2, s * b.x4};
}

BlaschkePoint isotropic_to_blaschke(const IsoPoint& y) {
    Rational w = 1 + y.x * y.x + y.y * y.y;
    Rational s = 1 / w;
    return {s * 2 * y.x, s * 2 * y.y, s * (y.x * y.x + y.y * y.y - 1), s * 2 * y.z};
}

LiftedPatch lift_patch(const PolyVec3& y) {
    BivariatePoly w = BivariatePoly(Rational(1)) + y.x * y.x + y.y * y.y;
    PolyVec3 n{Rational(2) * y.x, Rational(2) * y.y, w - BivariatePoly(Rational(2))};
    BivariatePoly h = Rational(2) * y.z;
    return {n, h, w};
}

IsoPlane contact_plane(const IsoPoint& a, const Vec3Q& p) {
    // columns of the Jacobian of the inverse isotropic map at a, contracted
    // with (p, -1) and scaled by (1 + a1^2 + a2^2)^2 / 2
    const Rational &a1 = a.x, &a2 = a.y, &a3 = a.z;
    Rational m1 = (1 - a1 * a1 + a2 * a2) * p.x - 2 * a1 * a2 * p.y + 2 * a1 * p.z + 2 * a1 * a3;
    Rational m2 = -2 * a1 * a2 * p.x + (1 + a1 * a1 - a2 * a2) * p.y + 2 * a2 * p.z + 2 * a2 * a3;
    Rational m3 = -(1 + a1 * a1 + a2 * a2);
    Vec3Q m{m1, m2, m3};
    if (is_zero(m)) throw Error(ErrorCode::degenerate_plane, "degenerate contact plane");
    return {m, a};
}

Vec3Q envelope_point(const Vec3Q& n, const Vec3Q& nu, const Vec3Q& nv,
                     const Rational& h, const Rational& hu, const Rational& hv) {
    Mat3Q M{n, nu, nv};
    try {
        return solve3(M, {h, hu, hv});
    } catch (const Error&) {
        throw Error(ErrorCode::gauss_degenerate,
                    "parabolic contact configuration: det(n, n_u, n_v) = 0");
    }
}

namespace {

BivariatePoly poly_det3(const std::array<PolyVec3, 3>& rows) {
    return rows[0].x * (rows[1].y * rows[2].z - rows[1].z * rows[2].y) -
           rows[0].y * (rows[1].x * rows[2].z - rows[1].z * rows[2].x) +
           rows[0].z * (rows[1].x * rows[2].y - rows[1].y * rows[2].x);
}

} // namespace

PnPatch envelope_patch(const PolyVec3& y) {
    LiftedPatch lifted = lift_patch(y);
    const PolyVec3& n = lifted.normal_num;
    const BivariatePoly& w = lifted.den;
    const BivariatePoly& h = lifted.support_num;

    BivariatePoly wu = w.diff_u(), wv = w.diff_v();
    // numerators of n_u, n_v, h_u, h_v over w^2
    PolyVec3 a = w * n.diff_u() - wu * n;
    PolyVec3 b = w * n.diff_v() - wv * n;
    BivariatePoly rhs_u = w * h.diff_u() - wu * h;
    BivariatePoly rhs_v = w * h.diff_v() - wv * h;

    BivariatePoly delta = poly_det3({n, a, b});
    if (delta.is_zero())
        throw Error(ErrorCode::globally_degenerate,
                    "contact system singular as a polynomial identity (constant Gauss map?)");

    PolyVec3 rhs{h, rhs_u, rhs_v};
    std::array<PolyVec3, 3> rows{n, a, b};
    PolyVec3 x;
    for (int k = 0; k < 3; ++k) {
        std::array<PolyVec3, 3> repl = rows;
        for (int r = 0; r < 3; ++r) repl[r][k] = rhs[r];
        x[k] = poly_det3(repl);
    }

    PnPatch p;
    p.normal_num = n;
    p.support_num = h;
    p.nh_den = w;
    p.point_num = x;
    p.point_den = delta;
    p.source = y;
    p.has_source = true;
    p.offset = 0;
    return p;
}

PnPatch offset_patch(const PnPatch& p, const Rational& d) {
    PnPatch r = p;
    if (d == 0) return r;
    r.support_num = p.support_num + d * p.nh_den;
    // x' = x + d n over the common denominator delta * W
    r.point_num = p.nh_den * p.point_num + (d * p.point_den) * p.normal_num;
    r.point_den = p.point_den * p.nh_den;
    r.offset = p.offset + d;
    return r;
}

Vec3Q sphere_point(const Rational& u, const Rational& v) {
    Rational w = 1 + u * u + v * v;
    return {2 * u / w, 2 * v / w, (1 - u * u - v * v) / w};
}

RatFnVec3 sphere_param_field() {
    BivariatePoly u = BivariatePoly::var_u(), v = BivariatePoly::var_v();
    BivariatePoly w = BivariatePoly(Rational(1)) + u * u + v * v;
    return {RatFn(Rational(2) * u, w), RatFn(Rational(2) * v, w),
            RatFn(BivariatePoly(Rational(2)) - w, w)};
}

} // namespace pnsurf
