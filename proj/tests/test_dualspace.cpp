#include <doctest.h>

#include "helpers.hpp"

using namespace pnsurf;
using namespace pnsurf::testing;

TEST_SUITE("dualspace") {
    TEST_CASE("support values of the sample data") {
        TangentPlane t0 = support_value({rq(0), rq(0), rq(0)}, {rq(0), rq(0), rq(-1)});
        CHECK(t0.normal == Vec3Q{rq(0), rq(0), rq(-1)});
        CHECK(t0.h == 0);

        TangentPlane t1 =
            support_value({rq(0), rq(-11, 72), rq(-1, 12)}, {rq(0), rq(4), rq(-3)});
        CHECK(t1.normal == Vec3Q{rq(0), rq(4, 5), rq(-3, 5)});
        CHECK(t1.h == rq(-13, 180));

        TangentPlane t2 = support_value({rq(0), rq(-2, 9), rq(-1, 3)}, {rq(0), rq(1), rq(0)});
        CHECK(t2.h == rq(-2, 9));

        CHECK_THROWS_AS(support_value({rq(1), rq(1), rq(1)}, {rq(0), rq(0), rq(0)}), Error);
    }

    TEST_CASE("irrational norms snap to exactly-unit rational normals") {
        Vec3Q n = exact_unit_normal({rq(1), rq(1), rq(0)});
        CHECK(norm2(n) == 1);
        Vec3d nd = to_double(n);
        double inv = 1.0 / std::sqrt(2.0);
        CHECK(std::fabs(nd.x - inv) < 1e-12);
        CHECK(std::fabs(nd.y - inv) < 1e-12);
    }

    TEST_CASE("isotropic projection") {
        CHECK(blaschke_to_isotropic({rq(0), rq(0), rq(-1), rq(0)}) == Vec3Q{rq(0), rq(0), rq(0)});
        CHECK(blaschke_to_isotropic({rq(1), rq(0), rq(0), rq(0)}) == Vec3Q{rq(1), rq(0), rq(0)});
        CHECK_THROWS_AS(blaschke_to_isotropic({rq(0), rq(0), rq(1), rq(5)}), Error);
    }

    TEST_CASE("inverse projection and both round trips") {
        BlaschkePoint b0 = isotropic_to_blaschke({rq(0), rq(0), rq(0)});
        CHECK(b0.x1 == 0);
        CHECK(b0.x2 == 0);
        CHECK(b0.x3 == -1);
        CHECK(b0.x4 == 0);

        BlaschkePoint b1 = isotropic_to_blaschke({rq(1), rq(0), rq(0)});
        CHECK(b1.x1 == 1);
        CHECK(b1.x2 == 0);
        CHECK(b1.x3 == 0);
        CHECK(b1.x4 == 0);

        Rng rng(43);
        for (int t = 0; t < 1000; ++t) {
            IsoPoint y = rng.vec3();
            IsoPoint back = blaschke_to_isotropic(isotropic_to_blaschke(y));
            CHECK(back == y);
        }
        for (int t = 0; t < 1000; ++t) {
            Vec3Q n = sphere_point(rng.rational(), rng.rational());
            BlaschkePoint b{n.x, n.y, Rational(-1) * n.z, rng.rational()};
            CHECK(b.x1 * b.x1 + b.x2 * b.x2 + b.x3 * b.x3 == 1);
            if (b.x3 == 1) continue;
            IsoPoint y = blaschke_to_isotropic(b);
            BlaschkePoint back = isotropic_to_blaschke(y);
            CHECK(back.x1 == b.x1);
            CHECK(back.x2 == b.x2);
            CHECK(back.x3 == b.x3);
            CHECK(back.x4 == b.x4);
        }
    }

    TEST_CASE("patch lift: constant and linear patches") {
        PolyVec3 zero{BivariatePoly(), BivariatePoly(), BivariatePoly()};
        LiftedPatch l0 = lift_patch(zero);
        CHECK(l0.normal_num.x.is_zero());
        CHECK(l0.normal_num.y.is_zero());
        CHECK(l0.normal_num.z == BivariatePoly(Rational(-1)));
        CHECK(l0.support_num.is_zero());
        CHECK(l0.den == BivariatePoly(Rational(1)));

        BivariatePoly u = BivariatePoly::var_u(), v = BivariatePoly::var_v();
        PolyVec3 lin{u, v, BivariatePoly()};
        LiftedPatch l1 = lift_patch(lin);
        CHECK(l1.normal_num.x == Rational(2) * u);
        CHECK(l1.normal_num.y == Rational(2) * v);
        CHECK(l1.normal_num.z == u * u + v * v - BivariatePoly(Rational(1)));
        CHECK(l1.den == BivariatePoly(Rational(1)) + u * u + v * v);
        CHECK(l1.support_num.is_zero());
    }

    TEST_CASE("lifted normals are exactly unit for random bicubic patches") {
        Rng rng(47);
        for (int t = 0; t < 5; ++t) {
            PolyVec3 y = rng.polyvec(3, 3);
            LiftedPatch l = lift_patch(y);
            // dot(n, n) == 1 as a rational identity <=> ||N||^2 == W^2
            CHECK(dot(l.normal_num, l.normal_num) == l.den * l.den);
        }
    }

    TEST_CASE("contact plane at the origin") {
        IsoPlane tau = contact_plane({rq(0), rq(0), rq(0)}, {rq(0), rq(0), rq(0)});
        CHECK(tau.m.x == 0);
        CHECK(tau.m.y == 0);
        CHECK(tau.m.z != 0); // the plane y3 = 0
    }

    TEST_CASE("contact plane against finite differences of the contact condition") {
        // directions inside tau must satisfy d/dt [ (n,h) . (p,-1) ] = 0 along
        // the lifted curve; directions off tau must not
        Rng rng(53);
        auto fd_residual = [](const IsoPoint& a, const Vec3Q& p, const Vec3Q& dir) {
            const double step = 1e-6;
            auto lift = [&](double t) {
                Vec3Q y{a.x + rationalize(t * to_double(dir.x), 1e-18),
                        a.y + rationalize(t * to_double(dir.y), 1e-18),
                        a.z + rationalize(t * to_double(dir.z), 1e-18)};
                BlaschkePoint b = isotropic_to_blaschke(y);
                return to_double(b.x1 * p.x + b.x2 * p.y + b.x3 * p.z - b.x4);
            };
            return (lift(step) - lift(-step)) / (2 * step);
        };

        std::vector<std::pair<IsoPoint, Vec3Q>> cases;
        cases.push_back({{rq(1), rq(0), rq(0)}, {rq(1), rq(0), rq(0)}});
        for (int t = 0; t < 5; ++t) cases.push_back({rng.vec3(), rng.vec3()});

        for (const auto& [a, p] : cases) {
            IsoPlane tau = contact_plane(a, p);
            // two independent directions spanning tau
            Vec3Q t1 = cross(tau.m, {rq(1), rq(0), rq(0)});
            if (is_zero(t1)) t1 = cross(tau.m, {rq(0), rq(1), rq(0)});
            Vec3Q t2 = cross(tau.m, t1);
            double scale = std::max(1.0, std::fabs(to_double(dot(tau.m, tau.m))));
            CHECK(std::fabs(fd_residual(a, p, t1)) < 1e-4 * scale);
            CHECK(std::fabs(fd_residual(a, p, t2)) < 1e-4 * scale);
            double off = fd_residual(a, p, tau.m);
            CHECK(std::fabs(off) > 1e-4); // the normal direction violates contact
        }
    }

    TEST_CASE("envelope point solves") {
        Vec3Q x = envelope_point({rq(0), rq(0), rq(1)}, {rq(1), rq(0), rq(0)},
                                 {rq(0), rq(1), rq(0)}, rq(2), rq(0), rq(0));
        CHECK(x == Vec3Q{rq(0), rq(0), rq(2)});

        // constant support 1 over the sphere gives the unit sphere itself
        RatFnVec3 sphere = sphere_param_field();
        RatFnVec3 su = sphere.diff_u(), sv = sphere.diff_v();
        Rng rng(59);
        for (int t = 0; t < 10; ++t) {
            Rational u = rng.rational(), v = rng.rational();
            Vec3Q n = sphere.eval(u, v), nu = su.eval(u, v), nv = sv.eval(u, v);
            Vec3Q p = envelope_point(n, nu, nv, rq(1), rq(0), rq(0));
            CHECK(p == n);
        }

        // shifted sphere: h = n.c + r  =>  x = c + r n
        Vec3Q c{rq(1, 2), rq(-1, 3), rq(2)};
        Rational r = rq(3, 2);
        for (int t = 0; t < 10; ++t) {
            Rational u = rng.rational(), v = rng.rational();
            Vec3Q n = sphere.eval(u, v), nu = su.eval(u, v), nv = sv.eval(u, v);
            Vec3Q x2 = envelope_point(n, nu, nv, dot(n, c) + r, dot(nu, c), dot(nv, c));
            CHECK(x2 == c + r * n);
            CHECK(dot(n, x2) == dot(n, c) + r);
            CHECK(dot(nu, x2) == dot(nu, c));
            CHECK(dot(nv, x2) == dot(nv, c));
        }

        CHECK_THROWS_AS(envelope_point({rq(1), rq(0), rq(0)}, {rq(2), rq(0), rq(0)},
                                       {rq(0), rq(1), rq(0)}, rq(1), rq(0), rq(0)),
                        Error);
    }

    TEST_CASE("offset of a support function shifts the envelope along normals") {
        RatFnVec3 sphere = sphere_param_field();
        RatFnVec3 su = sphere.diff_u(), sv = sphere.diff_v();
        Rng rng(61);
        for (int t = 0; t < 10; ++t) {
            Rational u = rng.rational(), v = rng.rational();
            Vec3Q n = sphere.eval(u, v), nu = su.eval(u, v), nv = sv.eval(u, v);
            Rational h = rng.rational(), hu = rng.rational(), hv = rng.rational();
            Rational d = rng.rational();
            Vec3Q x = envelope_point(n, nu, nv, h, hu, hv);
            Vec3Q xd = envelope_point(n, nu, nv, h + d, hu, hv);
            CHECK(xd == x + d * n);
        }
    }

    TEST_CASE("envelope patch: degenerate inputs") {
        PolyVec3 constant{BivariatePoly(rq(1)), BivariatePoly(rq(2)), BivariatePoly(rq(3))};
        CHECK_THROWS_AS(envelope_patch(constant), Error);
    }

    TEST_CASE("envelope patch: contact identities hold symbolically") {
        BivariatePoly u = BivariatePoly::var_u(), v = BivariatePoly::var_v();

        auto check_identities = [](const PnPatch& p) {
            const PolyVec3& n = p.normal_num;
            const BivariatePoly &w = p.nh_den, &h = p.support_num;
            const PolyVec3& x = p.point_num;
            const BivariatePoly& d = p.point_den;
            // n.x = h        <=> dot(N, X) = H delta
            CHECK(dot(n, x) == h * d);
            // n_u.x = h_u    <=> dot(N_u W - N W_u, X) = (H_u W - H W_u) delta
            PolyVec3 a = w * n.diff_u() - w.diff_u() * n;
            PolyVec3 b = w * n.diff_v() - w.diff_v() * n;
            CHECK(dot(a, x) == (w * h.diff_u() - w.diff_u() * h) * d);
            CHECK(dot(b, x) == (w * h.diff_v() - w.diff_v() * h) * d);
            // unit normal identity
            CHECK(dot(n, n) == w * w);
        };

        PolyVec3 lin{u, v, BivariatePoly()};
        PnPatch pl = envelope_patch(lin);
        check_identities(pl);
        // all tangent planes pass through the origin: the envelope point
        // field collapses to the pencil vertex
        CHECK(pl.point_num.x.is_zero());
        CHECK(pl.point_num.y.is_zero());
        CHECK(pl.point_num.z.is_zero());

        PnPatch sphere = envelope_patch(sphere_iso_patch({rq(1), rq(-2), rq(1, 3)}, rq(2)));
        check_identities(sphere);

        Rng rng(67);
        PolyVec3 y = rng.polyvec(2, 2);
        PnPatch generic = envelope_patch(y);
        check_identities(generic);
    }

    TEST_CASE("envelope patch of sphere data reproduces the sphere") {
        Vec3Q c{rq(1, 4), rq(-1, 3), rq(1, 2)};
        Rational r = rq(5, 4);
        PnPatch p = envelope_patch(sphere_iso_patch(c, r));
        Rng rng(71);
        for (int t = 0; t < 20; ++t) {
            Rational u = rng.rational(), v = rng.rational();
            ExactSample s = exact_sample(p, u, v);
            REQUIRE(!s.pole);
            CHECK(norm2(s.x - c) == r * r);
            CHECK(s.x == c + r * s.n);
        }
    }

    TEST_CASE("sphere parameterization") {
        CHECK(sphere_point(rq(0), rq(0)) == Vec3Q{rq(0), rq(0), rq(1)});
        CHECK(sphere_point(rq(1), rq(0)) == Vec3Q{rq(1), rq(0), rq(0)});
        RatFnVec3 f = sphere_param_field();
        RatFn unit = dot(f, f);
        CHECK(unit.equals(RatFn::constant(1)));
    }
}
