#include <doctest.h>

#include "grid_io.hpp"
#include "helpers.hpp"
#include "pipeline.hpp"

using namespace pnsurf;
using namespace pnsurf::testing;

namespace {

HermiteGrid sample_grid() {
    return load_grid(std::string(PNSURF_DATA_DIR) + "/grid_3x3.json");
}

PnPatch plane_patch() {
    // x = (u, v, 0) with unit normal (0,0,1)
    PnPatch p;
    p.normal_num = {BivariatePoly(), BivariatePoly(), BivariatePoly(rq(1))};
    p.nh_den = BivariatePoly(rq(1));
    p.support_num = BivariatePoly();
    p.point_num = {BivariatePoly::var_u(), BivariatePoly::var_v(), BivariatePoly()};
    p.point_den = BivariatePoly(rq(1));
    return p;
}

PnPatch enneper_patch() {
    BivariatePoly u = BivariatePoly::var_u(), v = BivariatePoly::var_v();
    BivariatePoly w = BivariatePoly(rq(1)) + u * u + v * v;
    PnPatch p;
    p.point_num = {u - frac(1, 3) * (u * u * u) + u * (v * v),
                   v - frac(1, 3) * (v * v * v) + v * (u * u), u * u - v * v};
    p.point_den = BivariatePoly(rq(1));
    p.normal_num = {rq(-2) * u, rq(2) * v, BivariatePoly(rq(1)) - u * u - v * v};
    p.nh_den = w;
    // h = n.x = (N.x)/W, so the support numerator over W is just N.x
    p.support_num = dot(p.normal_num, p.point_num);
    return p;
}

// grid sampled from a torus band that crosses the parabolic circle, rotated
// so the Gauss image stays away from (0,0,1)
HermiteGrid torus_band_grid() {
    const double R = 2.0, r = 1.0;
    const int nrows = 4, ncols = 4;
    HermiteGrid g;
    g.rows = nrows;
    g.cols = ncols;
    for (int i = 0; i < nrows; ++i) {
        double phi = 3.14159265358979 / 2 - 0.7 + 1.4 * i / (nrows - 1);
        for (int j = 0; j < ncols; ++j) {
            double th = -0.35 + 0.7 * j / (ncols - 1);
            Vec3d pt{(R + r * std::cos(phi)) * std::cos(th),
                     (R + r * std::cos(phi)) * std::sin(th), r * std::sin(phi)};
            Vec3d nm{std::cos(phi) * std::cos(th), std::cos(phi) * std::sin(th),
                     std::sin(phi)};
            // rotate (x,y,z) -> (z,y,-x) so the parabolic normals go to (1,0,0)
            Vec3Q p{rationalize(pt.z, 1e-12), rationalize(pt.y, 1e-12),
                    rationalize(-pt.x, 1e-12)};
            Vec3Q n{rationalize(nm.z, 1e-12), rationalize(nm.y, 1e-12),
                    rationalize(-nm.x, 1e-12)};
            g.points.push_back(p);
            g.normals.push_back(n);
        }
    }
    g.init_default_scales();
    return g;
}

} // namespace

TEST_SUITE("pn-verify") {
    TEST_CASE("plane and Enneper are exactly PN") {
        PnCertificate plane = verify_pn(plane_patch(), "plane");
        CHECK(plane.exact_pn);

        PnCertificate enneper = verify_pn(enneper_patch(), "enneper");
        CHECK(enneper.exact_pn);
    }

    TEST_CASE("Enneper area element is the expected perfect square") {
        PnPatch p = enneper_patch();
        PolyVec3 w = cross(p.point_num.diff_u(), p.point_num.diff_v());
        BivariatePoly u = BivariatePoly::var_u(), v = BivariatePoly::var_v();
        BivariatePoly s = BivariatePoly(rq(1)) + u * u + v * v;
        CHECK(dot(w, w) == s * s * s * s);
        CHECK(w == s * p.normal_num); // cross(x_u, x_v) = (1+u^2+v^2) N
    }

    TEST_CASE("a perturbed patch fails with a witness") {
        PnPatch p = plane_patch();
        p.point_num.z = BivariatePoly::monomial({3, 0}, rq(1)); // x = (u, v, u^3)
        PnCertificate cert = verify_pn(p, "perturbed");
        CHECK(!cert.exact_pn);
        REQUIRE(cert.witness.has_value());
        // the witness is a genuine counterexample of the identity
        ExactSample s = exact_sample(p, cert.witness->first, cert.witness->second);
        Vec3Q w = cross(s.xu, s.xv);
        CHECK(norm2(w) != dot(w, s.n) * dot(w, s.n));
    }

    TEST_CASE("patches from the construction pipeline verify as exact PN") {
        Bundle b = interpolate_grid(sample_grid());
        REQUIRE(b.patches.size() == 4);
        for (const auto& bp : b.patches) {
            // parallelism of the area vector and the normal, symbolically at
            // sample level: cross(cross(xu,xv), n) = 0
            Rng rng(91);
            for (int t = 0; t < 5; ++t) {
                ExactSample s = exact_sample(bp.patch, frac(1 + rng.gen() % 7, 8),
                                             frac(1 + rng.gen() % 7, 8));
                REQUIRE(!s.pole);
                CHECK(is_zero(cross(cross(s.xu, s.xv), s.n)));
            }
        }
    }
}

TEST_SUITE("g1") {
    TEST_CASE("shared edges of the sample network are exactly G1") {
        Bundle b = interpolate_grid(sample_grid());
        G1Report rep = check_g1_cells(b.at(0, 0).patch, {0, 0}, b.at(1, 0).patch, {1, 0}, 33,
                                      1e-12);
        CHECK(rep.positions_exact);
        CHECK(rep.normals_exact);
        CHECK(rep.max_normal_angle == 0);
        CHECK(rep.pass);
    }

    TEST_CASE("a patch against itself passes trivially") {
        Bundle b = interpolate_grid(sample_grid());
        G1Report rep =
            check_g1(b.at(0, 0).patch, EdgeSide::u0, b.at(0, 0).patch, EdgeSide::u0, 17, 1e-12);
        CHECK(rep.pass);
    }

    TEST_CASE("independently perturbed tangents break the junction") {
        HermiteGrid g = sample_grid();
        Bundle b1 = interpolate_grid(g);
        g.tangent_scales[g.idx(1, 0)] = {rq(3, 2), rq(3, 2)};
        g.tangent_scales[g.idx(1, 1)] = {rq(1, 2), rq(2)};
        Bundle b2 = interpolate_grid(g);
        G1Report rep =
            check_g1_cells(b1.at(0, 0).patch, {0, 0}, b2.at(1, 0).patch, {1, 0}, 33, 1e-12);
        CHECK(!rep.pass);
        CHECK(rep.max_position_deviation > 0);
    }

    TEST_CASE("non-adjacent cells are rejected") {
        Bundle b = interpolate_grid(sample_grid());
        CHECK_THROWS_AS(
            check_g1_cells(b.at(0, 0).patch, {0, 0}, b.at(1, 1).patch, {1, 1}, 9, 1e-12),
            Error);
    }
}

TEST_SUITE("offset") {
    TEST_CASE("zero offset is the identity") {
        PnPatch p = enneper_patch();
        PnPatch p0 = offset_patch(p, rq(0));
        CHECK(p0.point_num == p.point_num);
        CHECK(p0.support_num == p.support_num);
    }

    TEST_CASE("offset of the plane") {
        PnPatch p2 = offset_patch(plane_patch(), rq(2));
        CHECK(p2.point_num.x == BivariatePoly::var_u());
        CHECK(p2.point_num.y == BivariatePoly::var_v());
        CHECK(p2.point_num.z == BivariatePoly(rq(2)));
        CHECK(p2.support_num == BivariatePoly(rq(2)));
    }

    TEST_CASE("offset distance is exact at rational samples") {
        Bundle b = interpolate_grid(sample_grid());
        Rational d = rq(1, 10);
        Rng rng(97);
        for (const auto& bp : b.patches) {
            PnPatch off = offset_patch(bp.patch, d);
            for (int t = 0; t < 50; ++t) {
                Rational u = frac(rng.gen() % 33, 32), v = frac(rng.gen() % 33, 32);
                ExactSample s0 = exact_sample(bp.patch, u, v);
                ExactSample s1 = exact_sample(off, u, v);
                REQUIRE(!s0.pole);
                REQUIRE(!s1.pole);
                CHECK(norm2(s1.x - s0.x) == d * d);
                CHECK(s1.n == s0.n);
                CHECK(s1.h == s0.h + d);
            }
        }
    }

    TEST_CASE("offsets of exact-PN patches stay exact-PN") {
        PnPatch enneper = enneper_patch();
        PnCertificate cert = verify_pn(offset_patch(enneper, rq(1, 2)), "enneper+1/2");
        CHECK(cert.exact_pn);
    }
}

TEST_SUITE("curvature") {
    TEST_CASE("unit sphere: identity radius matrix") {
        PnPatch p = envelope_patch(sphere_iso_patch({rq(0), rq(0), rq(0)}, rq(1)));
        CurvatureField f = sample_curvature(p, 9);
        for (const auto& s : f.samples) {
            REQUIRE(!s.degenerate);
            CHECK(s.det_ratio == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.gauss_k == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.eig1 == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(s.eig2 == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    TEST_CASE("sphere of radius r: det = r^2, K = 1/r^2, exactly at samples") {
        Rational r = rq(3);
        PnPatch p = envelope_patch(sphere_iso_patch({rq(1), rq(-1), rq(2)}, r));
        std::vector<Rational> us = {rq(0), rq(1, 4), rq(1, 2), rq(3, 4), rq(1)};
        for (const Rational& u : us)
            for (const Rational& v : us) {
                ExactSample s = exact_sample(p, u, v);
                REQUIRE(!s.pole);
                REQUIRE(!s.gauss_degenerate);
                CHECK(s.det_ratio == r * r);
            }
    }

    TEST_CASE("ratio formula matches the finite-difference intrinsic Hessian") {
        // sphere with non-constant support function h(n) = c.n + r
        Vec3Q cq{rq(1, 2), rq(-1, 3), rq(3, 4)};
        Rational rr = rq(2);
        PnPatch p = envelope_patch(sphere_iso_patch(cq, rr));
        Vec3d c = to_double(cq);
        double r = to_double(rr);
        auto h = [&](const Vec3d& n) { return dot(c, n) + r; };

        Rng rng(101);
        std::uniform_real_distribution<double> unif(0.05, 0.95);
        for (int t = 0; t < 100; ++t) {
            double u = unif(rng.gen), v = unif(rng.gen);
            ExactSample s = exact_sample(p, rationalize(u, 1e-15), rationalize(v, 1e-15));
            REQUIRE(!s.gauss_degenerate);
            double fd = fd_radius_det(h, to_double(s.n), 1e-4);
            double exact = to_double(s.det_ratio);
            CHECK(std::fabs(fd - exact) <= 1e-6 * std::fabs(exact));
        }
    }

    TEST_CASE("ratio formula matches the Newton-inverted support oracle on generic patches") {
        Bundle b = interpolate_grid(sample_grid());
        const PnPatch& p = b.at(0, 0).patch;
        for (double u0 : {0.3, 0.5, 0.7}) {
            for (double v0 : {0.35, 0.55, 0.75}) {
                ExactSample s =
                    exact_sample(p, rationalize(u0, 1e-15), rationalize(v0, 1e-15));
                REQUIRE(!s.gauss_degenerate);
                PatchSupportOnSphere h{p, u0, v0};
                double fd = fd_radius_det(h, to_double(s.n), 1e-4);
                double exact = to_double(s.det_ratio);
                CHECK(std::fabs(fd - exact) <= 1e-5 * std::fabs(exact));
            }
        }
    }

    TEST_CASE("det * K = 1 at non-degenerate samples") {
        PnPatch p = envelope_patch(sphere_iso_patch({rq(1), rq(0), rq(0)}, rq(2)));
        CurvatureField f = sample_curvature(p, 7);
        for (const auto& s : f.samples) {
            REQUIRE(!s.degenerate);
            CHECK(s.det_ratio * s.gauss_k == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_SUITE("ridges") {
    TEST_CASE("sphere data is ridge-free at any resolution") {
        PnPatch p = envelope_patch(sphere_iso_patch({rq(0), rq(0), rq(0)}, rq(1)));
        for (int res : {5, 17, 33}) {
            RidgeReport rep = detect_ridges(sample_curvature(p, res));
            CHECK(rep.ridge_free());
        }
    }

    TEST_CASE("torus band crossing its parabolic circle is flagged") {
        Bundle b = interpolate_grid(torus_band_grid());
        bool any = false;
        for (const auto& bp : b.patches) {
            RidgeReport rep = detect_ridges(sample_curvature(bp.patch, 17));
            any = any || !rep.ridge_free();
        }
        CHECK(any);
    }

    TEST_CASE("sample data is ridge-free") {
        Bundle b = interpolate_grid(sample_grid());
        for (const auto& bp : b.patches) {
            RidgeReport rep = detect_ridges(sample_curvature(bp.patch, 17));
            CHECK(rep.ridge_free());
        }
    }
}

TEST_SUITE("objective") {
    TEST_CASE("constant-curvature closed forms") {
        // Gauss-image area of the parameter square under the rational sphere
        // chart: independent fine midpoint quadrature of 4/(1+u^2+v^2)^2
        auto area = [] {
            const int n = 400;
            double sum = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double u = (a + 0.5) / n, v = (b + 0.5) / n;
                    double w = 1 + u * u + v * v;
                    sum += 4 / (w * w);
                }
            return sum / (n * n);
        }();

        // synthetic network whose single patch is the exact sphere chart
        auto sphere_network = [](const Rational& r) {
            CoonsNetwork nw;
            nw.cell_rows = nw.cell_cols = 1;
            CoonsPatch p;
            p.surface = sphere_iso_patch({rq(0), rq(0), rq(0)}, r);
            nw.patches.push_back(std::move(p));
            return nw;
        };

        ObjectiveValue unit = network_objective(sphere_network(rq(1)), 64);
        CHECK(unit.bad_samples == 0);
        CHECK(std::fabs(unit.value - area) / area < 1e-3); // K^2 = 1

        const double r = 2.0;
        ObjectiveValue scaled = network_objective(sphere_network(rq(2)), 64);
        double expected = area / std::pow(r, 4);
        CHECK(std::fabs(scaled.value - expected) / expected < 1e-3);
    }
}

TEST_SUITE("optimizer") {
    TEST_CASE("degenerate bounds return all-ones unchanged") {
        HermiteGrid g = sample_grid();
        OptimizeResult res = optimize_tangent_scales(g, 1.0, 1.0, 50, 8);
        for (const auto& s : res.scales) {
            CHECK(s[0] == 1);
            CHECK(s[1] == 1);
        }
        CHECK(res.objective_after <= res.objective_before);
    }

    TEST_CASE("monotone acceptance never worsens the objective") {
        HermiteGrid g = sample_grid();
        OptimizeResult res = optimize_tangent_scales(g, 0.5, 2.0, 60, 8);
        CHECK(res.objective_after <= res.objective_before);
        CHECK(res.evaluations <= 60);
    }

    TEST_CASE("bad tangent scales produce ridges; optimization removes them") {
        // smooth sphere-cap data with deliberately oversized stored scales
        HermiteGrid g;
        g.rows = g.cols = 3;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Vec3Q n = sphere_point(frac(i - 1, 2), frac(j - 1, 2));
                n.z = -n.z;
                g.points.push_back(n);
                g.normals.push_back(n);
            }
        g.tangent_scales.assign(9, {rq(5), rq(5)});

        auto ridge_count = [](const HermiteGrid& grid) {
            Bundle b = interpolate_grid(grid);
            size_t flags = 0;
            for (const auto& bp : b.patches)
                flags += detect_ridges(sample_curvature(bp.patch, 17)).flags.size();
            return flags;
        };
        CHECK(ridge_count(g) > 0);

        OptimizeResult res = optimize_tangent_scales(g, 0.25, 5.0, 200, 12);
        CHECK(res.objective_after < res.objective_before);
        HermiteGrid tuned = g;
        tuned.tangent_scales = res.scales;
        CHECK(ridge_count(tuned) == 0);
    }
}

TEST_SUITE("tessellation") {
    TEST_CASE("plane patch meshes flat with equal normals") {
        Mesh m = tessellate(plane_patch(), 4);
        CHECK(m.vertices.size() == 25);
        CHECK(m.triangles.size() == 32);
        CHECK(m.skipped.empty());
        for (const auto& n : m.normals) {
            CHECK(n.x == 0);
            CHECK(n.y == 0);
            CHECK(n.z == 1);
        }
        for (const auto& v : m.vertices) CHECK(v.z == 0);
    }

    TEST_CASE("smallest mesh has two triangles") {
        Mesh m = tessellate(plane_patch(), 1);
        CHECK(m.triangles.size() == 2);
    }

    TEST_CASE("sphere patch vertices sit on the sphere") {
        Vec3Q c{rq(1), rq(2), rq(-1)};
        PnPatch p = envelope_patch(sphere_iso_patch(c, rq(1)));
        Mesh m = tessellate(p, 8);
        CHECK(m.skipped.empty());
        Vec3d cd = to_double(c);
        for (const auto& v : m.vertices)
            CHECK(norm(v - cd) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
