#pragma once

#include <functional>
#include <random>

#include "analysis.hpp"
#include "dualspace.hpp"

namespace pnsurf::testing {

inline Rational rq(long n, long d = 1) { return frac(n, d); }

inline BivariatePoly u_pow(int i) { return BivariatePoly::monomial({i, 0}, 1); }
inline BivariatePoly v_pow(int j) { return BivariatePoly::monomial({0, j}, 1); }

inline BivariatePoly make_poly(std::initializer_list<std::tuple<int, int, long, long>> terms) {
    BivariatePoly p;
    for (const auto& [i, j, num, den] : terms) p.set_coeff(i, j, frac(num, den));
    return p;
}

// deterministic random generators
struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}

    Rational rational(long max_num = 9, long max_den = 9) {
        std::uniform_int_distribution<long> num(-max_num, max_num);
        std::uniform_int_distribution<long> den(1, max_den);
        return frac(num(gen), den(gen));
    }
    Rational nonzero_rational(long max_num = 9, long max_den = 9) {
        Rational q;
        do q = rational(max_num, max_den); while (q == 0);
        return q;
    }
    BivariatePoly poly(int dmax_u, int dmax_v, double density = 0.7) {
        std::uniform_real_distribution<double> coin(0, 1);
        BivariatePoly p;
        for (int i = 0; i <= dmax_u; ++i)
            for (int j = 0; j <= dmax_v; ++j)
                if (coin(gen) < density) p.set_coeff(i, j, rational());
        return p;
    }
    Vec3Q vec3() { return {rational(), rational(), rational()}; }
    PolyVec3 polyvec(int du, int dv) { return {poly(du, dv), poly(du, dv), poly(du, dv)}; }
};

// Independent exactness oracle: bivariate polynomials of bidegree
// <= (d1,d2) are equal iff they agree on a (d1+1) x (d2+1) rational grid.
inline bool polys_equal_by_grid(const BivariatePoly& p, const BivariatePoly& q) {
    auto [pu, pv] = p.bidegree();
    auto [qu, qv] = q.bidegree();
    int d1 = std::max({pu, qu, 0}), d2 = std::max({pv, qv, 0});
    for (int a = 0; a <= d1; ++a)
        for (int b = 0; b <= d2; ++b) {
            Rational ua = frac(a + 1, d1 + 2), vb = frac(b + 1, d2 + 2);
            if (p.eval(ua, vb) != q.eval(ua, vb)) return false;
        }
    return true;
}

// Isotropic polynomial patch whose envelope is the sphere with center c and
// radius r (the support function restricted to this parameterization).
inline PolyVec3 sphere_iso_patch(const Vec3Q& c, const Rational& r) {
    BivariatePoly u = BivariatePoly::var_u(), v = BivariatePoly::var_v();
    BivariatePoly w = BivariatePoly(Rational(1)) + u * u + v * v;
    BivariatePoly y3 = 2 * c.x * u + 2 * c.y * v + c.z * (w - BivariatePoly(Rational(2))) + r * w;
    return {u, v, frac(1, 2) * y3};
}

// ---------------------------------------------------------------------------
// finite-difference oracle for det(Hess_{S^2} h + h I)

// h given as a function on the sphere; central differences with the given
// step in geodesic normal coordinates at n0.
inline double fd_radius_det(const std::function<double(const Vec3d&)>& h, const Vec3d& n0,
                            double step = 1e-4) {
    Vec3d axis = std::fabs(n0.x) <= std::fabs(n0.y) && std::fabs(n0.x) <= std::fabs(n0.z)
                     ? Vec3d{1, 0, 0}
                     : (std::fabs(n0.y) <= std::fabs(n0.z) ? Vec3d{0, 1, 0} : Vec3d{0, 0, 1});
    Vec3d e1 = cross(n0, axis);
    e1 = (1.0 / norm(e1)) * e1;
    Vec3d e2 = cross(n0, e1);

    auto at = [&](double s, double t) {
        double rho = std::sqrt(s * s + t * t);
        if (rho == 0) return h(n0);
        Vec3d dir = (1.0 / rho) * (s * e1 + t * e2);
        Vec3d n = std::cos(rho) * n0 + std::sin(rho) * dir;
        return h(n);
    };

    double h0 = at(0, 0);
    double hss = (at(step, 0) - 2 * h0 + at(-step, 0)) / (step * step);
    double htt = (at(0, step) - 2 * h0 + at(0, -step)) / (step * step);
    double hst =
        (at(step, step) + at(-step, -step) - at(step, -step) - at(-step, step)) /
        (4 * step * step);
    double m00 = hss + h0, m11 = htt + h0, m01 = hst;
    return m00 * m11 - m01 * m01;
}

// Support function of a patch as a function on the sphere, via Newton
// inversion of the Gauss map in doubles. Used to feed fd_radius_det for
// patches with no closed-form support.
struct PatchSupportOnSphere {
    const PnPatch& patch;
    double u0, v0;

    double operator()(const Vec3d& m) const {
        double u = u0, v = v0;
        for (int it = 0; it < 40; ++it) {
            double w = patch.nh_den.eval_double(u, v);
            Vec3d n{patch.normal_num.x.eval_double(u, v) / w,
                    patch.normal_num.y.eval_double(u, v) / w,
                    patch.normal_num.z.eval_double(u, v) / w};
            Vec3d axis = std::fabs(m.x) <= std::fabs(m.y) && std::fabs(m.x) <= std::fabs(m.z)
                             ? Vec3d{1, 0, 0}
                             : (std::fabs(m.y) <= std::fabs(m.z) ? Vec3d{0, 1, 0}
                                                                 : Vec3d{0, 0, 1});
            Vec3d e1 = cross(m, axis);
            e1 = (1.0 / norm(e1)) * e1;
            Vec3d e2 = cross(m, e1);
            double r1 = dot(e1, n - m), r2 = dot(e2, n - m);
            if (std::fabs(r1) + std::fabs(r2) < 1e-15) break;

            double wu = patch.nh_den.diff_u().eval_double(u, v);
            double wv = patch.nh_den.diff_v().eval_double(u, v);
            Vec3d Nu{patch.normal_num.x.diff_u().eval_double(u, v),
                     patch.normal_num.y.diff_u().eval_double(u, v),
                     patch.normal_num.z.diff_u().eval_double(u, v)};
            Vec3d Nv{patch.normal_num.x.diff_v().eval_double(u, v),
                     patch.normal_num.y.diff_v().eval_double(u, v),
                     patch.normal_num.z.diff_v().eval_double(u, v)};
            Vec3d nu = (1.0 / w) * (Nu - wu * n);
            Vec3d nv = (1.0 / w) * (Nv - wv * n);
            double j00 = dot(e1, nu), j01 = dot(e1, nv);
            double j10 = dot(e2, nu), j11 = dot(e2, nv);
            double det = j00 * j11 - j01 * j10;
            u -= (j11 * r1 - j01 * r2) / det;
            v -= (-j10 * r1 + j00 * r2) / det;
        }
        double w = patch.nh_den.eval_double(u, v);
        return patch.support_num.eval_double(u, v) / w;
    }
};

} // namespace pnsurf::testing
