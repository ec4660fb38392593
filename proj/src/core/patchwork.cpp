#include "patchwork.hpp"

#include <cmath>
#include <string>

namespace pnsurf {

void check_pole_proximity(const HermiteGrid& g, double eps_pole) {
    std::string offenders;
    for (int i = 0; i < g.rows; ++i) {
        for (int j = 0; j < g.cols; ++j) {
            Vec3Q n = exact_unit_normal(g.normal(i, j));
            double nz = to_double(n.z);
            double angle = std::acos(std::clamp(nz, -1.0, 1.0));
            if (angle < eps_pole) {
                if (!offenders.empty()) offenders += ", ";
                offenders += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        }
    }
    if (!offenders.empty())
        throw Error(ErrorCode::pole_proximity,
                    "normals within pole tolerance of (0,0,1) at " + offenders +
                        "; consider --auto-rotate");
}

Vec3Q CubicCurve::eval(const Rational& t) const {
    return coeff[0] + t * (coeff[1] + t * (coeff[2] + t * coeff[3]));
}

Vec3Q CubicCurve::deriv(const Rational& t) const {
    return coeff[1] + t * (Rational(2) * coeff[2] + t * (Rational(3) * coeff[3]));
}

CubicCurve hermite_cubic(const Vec3Q& p0, const Vec3Q& t0, const Vec3Q& p1, const Vec3Q& t1) {
    CubicCurve c;
    c.p0 = p0;
    c.p1 = p1;
    c.t0 = t0;
    c.t1 = t1;
    c.coeff[0] = p0;
    c.coeff[1] = t0;
    // from H0 = 2t^3-3t^2+1, H1 = -2t^3+3t^2 and the two tangent blends
    c.coeff[2] = Rational(-3) * p0 + Rational(3) * p1 + Rational(-2) * t0 + (-t1);
    c.coeff[3] = Rational(2) * p0 + Rational(-2) * p1 + t0 + t1;
    return c;
}

Vec3Q project_to_plane(const Vec3Q& w, const IsoPlane& plane) {
    const Vec3Q& m = plane.m;
    Rational f = dot(w, m) / norm2(m);
    return w - f * m;
}

namespace {

// cubic in one variable from per-degree vector coefficients
PolyVec3 curve_as_poly(const CubicCurve& c, bool in_u) {
    PolyVec3 p;
    for (int d = 0; d < 4; ++d) {
        Mono m = in_u ? Mono{d, 0} : Mono{0, d};
        for (int k = 0; k < 3; ++k)
            if (c.coeff[d][k] != 0) p[k] += BivariatePoly::monomial(m, c.coeff[d][k]);
    }
    return p;
}

BivariatePoly blend0(bool in_u) {
    // 2t^3 - 3t^2 + 1
    Mono t3 = in_u ? Mono{3, 0} : Mono{0, 3};
    Mono t2 = in_u ? Mono{2, 0} : Mono{0, 2};
    return BivariatePoly::monomial(t3, 2) + BivariatePoly::monomial(t2, -3) +
           BivariatePoly(Rational(1));
}

BivariatePoly blend1(bool in_u) {
    // -2t^3 + 3t^2
    Mono t3 = in_u ? Mono{3, 0} : Mono{0, 3};
    Mono t2 = in_u ? Mono{2, 0} : Mono{0, 2};
    return BivariatePoly::monomial(t3, -2) + BivariatePoly::monomial(t2, 3);
}

PolyVec3 const_field(const Vec3Q& a) {
    return {BivariatePoly(a.x), BivariatePoly(a.y), BivariatePoly(a.z)};
}

} // namespace

CoonsPatch coons_patch(std::shared_ptr<const CubicCurve> c0,
                       std::shared_ptr<const CubicCurve> c1,
                       std::shared_ptr<const CubicCurve> d0,
                       std::shared_ptr<const CubicCurve> d1) {
    const Vec3Q& a00 = c0->p0;
    const Vec3Q& a10 = c0->p1;
    const Vec3Q& a01 = c1->p0;
    const Vec3Q& a11 = c1->p1;
    if (d0->p0 != a00 || d1->p0 != a10 || d0->p1 != a01 || d1->p1 != a11)
        throw Error(ErrorCode::corner_mismatch, "boundary curves do not meet at the corners");

    BivariatePoly F0u = blend0(true), F1u = blend1(true);
    BivariatePoly F0v = blend0(false), F1v = blend1(false);

    PolyVec3 y = F0v * curve_as_poly(*c0, true) + F1v * curve_as_poly(*c1, true) +
                 F0u * curve_as_poly(*d0, false) + F1u * curve_as_poly(*d1, false) -
                 (F0u * F0v) * const_field(a00) - (F0u * F1v) * const_field(a01) -
                 (F1u * F0v) * const_field(a10) - (F1u * F1v) * const_field(a11);

    CoonsPatch p;
    p.surface = std::move(y);
    p.c0 = std::move(c0);
    p.c1 = std::move(c1);
    p.d0 = std::move(d0);
    p.d1 = std::move(d1);
    p.corners = {a00, a10, a01, a11};
    return p;
}

IsoNet build_iso_net(const HermiteGrid& g) {
    IsoNet net;
    net.rows = g.rows;
    net.cols = g.cols;
    net.points.resize(static_cast<size_t>(g.rows) * g.cols);
    net.planes.resize(static_cast<size_t>(g.rows) * g.cols);
    net.tan_u.resize(net.points.size());
    net.tan_v.resize(net.points.size());
    for (int i = 0; i < g.rows; ++i) {
        for (int j = 0; j < g.cols; ++j) {
            try {
                TangentPlane t = support_value(g.point(i, j), g.normal(i, j));
                IsoPoint a = blaschke_to_isotropic(to_blaschke(t));
                net.points[net.idx(i, j)] = a;
                net.planes[net.idx(i, j)] = contact_plane(a, g.point(i, j));
            } catch (const Error& e) {
                throw Error(e.code(), "grid point (" + std::to_string(i) + "," +
                                          std::to_string(j) + "): " + e.what());
            }
        }
    }
    return net;
}

void assign_boundary_tangents(IsoNet& net, const HermiteGrid& g) {
    const int m = net.rows - 1, n = net.cols - 1;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= n; ++j) {
            const IsoPoint& a = net.point(i, j);
            Vec3Q du, dv;
            if (i == 0)
                du = Rational(2) * (net.point(1, j) - a);
            else if (i == m)
                du = Rational(2) * (a - net.point(m - 1, j));
            else
                du = net.point(i + 1, j) - net.point(i - 1, j);
            if (j == 0)
                dv = Rational(2) * (net.point(i, 1) - a);
            else if (j == n)
                dv = Rational(2) * (a - net.point(i, n - 1));
            else
                dv = net.point(i, j + 1) - net.point(i, j - 1);

            const IsoPlane& plane = net.plane(i, j);
            Vec3Q tu = project_to_plane(du, plane);
            Vec3Q tv = project_to_plane(dv, plane);
            if (is_zero(tu) || is_zero(tv))
                throw Error(ErrorCode::degenerate_tangent,
                            "projected boundary tangent vanishes at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
            const auto& s = g.scale(i, j);
            net.tan_u[net.idx(i, j)] = s[0] * tu;
            net.tan_v[net.idx(i, j)] = s[1] * tv;
        }
    }
}

CoonsNetwork build_network(const HermiteGrid& g) {
    if (g.rows < 2 || g.cols < 2)
        throw Error(ErrorCode::parse, "grid needs at least 2x2 points");

    CoonsNetwork nw;
    nw.net = build_iso_net(g);
    assign_boundary_tangents(nw.net, g);
    nw.cell_rows = g.rows - 1;
    nw.cell_cols = g.cols - 1;

    const IsoNet& net = nw.net;
    nw.u_curves.resize(static_cast<size_t>(nw.cell_rows) * g.cols);
    for (int i = 0; i < nw.cell_rows; ++i)
        for (int j = 0; j < g.cols; ++j)
            nw.u_curves[i * g.cols + j] = std::make_shared<CubicCurve>(
                hermite_cubic(net.point(i, j), net.tan_u[net.idx(i, j)], net.point(i + 1, j),
                              net.tan_u[net.idx(i + 1, j)]));

    nw.v_curves.resize(static_cast<size_t>(g.rows) * nw.cell_cols);
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < nw.cell_cols; ++j)
            nw.v_curves[i * nw.cell_cols + j] = std::make_shared<CubicCurve>(
                hermite_cubic(net.point(i, j), net.tan_v[net.idx(i, j)], net.point(i, j + 1),
                              net.tan_v[net.idx(i, j + 1)]));

    nw.patches.reserve(static_cast<size_t>(nw.cell_rows) * nw.cell_cols);
    for (int r = 0; r < nw.cell_rows; ++r) {
        for (int c = 0; c < nw.cell_cols; ++c) {
            try {
                nw.patches.push_back(coons_patch(nw.u_curves[r * g.cols + c],
                                                 nw.u_curves[r * g.cols + c + 1],
                                                 nw.v_curves[r * nw.cell_cols + c],
                                                 nw.v_curves[(r + 1) * nw.cell_cols + c]));
            } catch (const Error& e) {
                throw Error(e.code(), "cell (" + std::to_string(r) + "," + std::to_string(c) +
                                          "): " + e.what());
            }
        }
    }
    return nw;
}

} // namespace pnsurf
