#pragma once

#include <optional>

#include "linalg.hpp"
#include "ratfn.hpp"

namespace pnsurf {

// Oriented tangent plane { x : n.x = h } with unit normal n and signed
// distance h to the origin.
struct TangentPlane {
    Vec3Q normal; // exactly unit
    Rational h;
};

// Point of the Blaschke cylinder S^2 x R in 4-space: (x1,x2,x3) is the
// plane's unit normal, x4 the support value.
struct BlaschkePoint {
    Rational x1, x2, x3, x4;
};

using IsoPoint = Vec3Q;

// Plane in the isotropic model through `anchor` with normal `m` (m != 0).
struct IsoPlane {
    Vec3Q m;
    IsoPoint anchor;
};

// Primal PN patch in rational form. The normal and support fields share
// the denominator W = 1 + y1^2 + y2^2 of the inverse stereographic map;
// the envelope point field has its own Cramer denominator.
struct PnPatch {
    PolyVec3 normal_num;       // N: n = N / nh_den, exactly unit
    BivariatePoly support_num; // H: h = H / nh_den
    BivariatePoly nh_den;      // W, strictly positive on the reals
    PolyVec3 point_num;        // X: x = X / point_den
    BivariatePoly point_den;   // Cramer determinant of the contact system
    PolyVec3 source;           // isotropic patch that generated this (optional)
    bool has_source = false;
    Rational offset;           // signed offset already applied to the support

    RatFnVec3 normal_field() const {
        return {RatFn(normal_num.x, nh_den), RatFn(normal_num.y, nh_den),
                RatFn(normal_num.z, nh_den)};
    }
    RatFn support_field() const { return RatFn(support_num, nh_den); }
    RatFnVec3 point_field() const {
        return {RatFn(point_num.x, point_den), RatFn(point_num.y, point_den),
                RatFn(point_num.z, point_den)};
    }
};

// Exactly-unit rational normalization. Rational-norm inputs normalize
// exactly; anything else is snapped to a nearby exactly-unit rational
// direction through stereographic coordinates (within ~1e-15).
Vec3Q exact_unit_normal(const Vec3Q& n_raw);

// Tangent plane of the point/normal pair: h = p . n_hat.
TangentPlane support_value(const Vec3Q& p, const Vec3Q& n_raw);

BlaschkePoint to_blaschke(const TangentPlane& t);

// Stereographic-style projection B \ w -> I; undefined on the generator
// through (0,0,1,0).
IsoPoint blaschke_to_isotropic(const BlaschkePoint& b);

// Inverse of the above; the third component is (y1^2+y2^2-1)/(1+y1^2+y2^2)
// so that the round trip through blaschke_to_isotropic is the identity.
BlaschkePoint isotropic_to_blaschke(const IsoPoint& y);

// Lift of the inverse map to a whole polynomial patch: returns the normal
// numerator N, support numerator H and shared denominator W.
struct LiftedPatch {
    PolyVec3 normal_num;
    BivariatePoly support_num;
    BivariatePoly den;
};
LiftedPatch lift_patch(const PolyVec3& y);

// Plane of directions at `a` whose lifted first-order variation keeps the
// primal contact point at p: { v : [J(iso^-1) v] . (p,-1) = 0 }.
IsoPlane contact_plane(const IsoPoint& a, const Vec3Q& p);

// Unique point satisfying n.x = h, nu.x = hu, nv.x = hv. Throws
// ErrorCode::gauss_degenerate for a singular (parabolic) configuration.
Vec3Q envelope_point(const Vec3Q& n, const Vec3Q& nu, const Vec3Q& nv,
                     const Rational& h, const Rational& hu, const Rational& hv);

// Pulls an isotropic polynomial patch back to a primal rational PN patch
// (symbolic Cramer solve of the contact conditions). Throws
// ErrorCode::globally_degenerate when the contact system is singular as a
// polynomial identity.
PnPatch envelope_patch(const PolyVec3& y);

// Offset at signed distance d: x' = x + d n, h' = h + d, n unchanged.
PnPatch offset_patch(const PnPatch& p, const Rational& d);

// Rational unit parameterization of S^2 projecting from the south pole;
// note the convention differs from isotropic_to_blaschke and the two are
// never mixed.
Vec3Q sphere_point(const Rational& u, const Rational& v);
RatFnVec3 sphere_param_field();

} // namespace pnsurf
