#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace pnsurf {

namespace {

// --------------------------------------------------------------------------
// bidegree bookkeeping ((-1,-1) marks the zero polynomial)

struct Bid {
    int u = -1, v = -1;
    bool zero() const { return u < 0; }
};

Bid bid_of(const BivariatePoly& p) {
    auto [du, dv] = p.bidegree();
    return {du, dv};
}

Bid bid_add(Bid a, Bid b) {
    if (a.zero() || b.zero()) return {};
    return {a.u + b.u, a.v + b.v};
}

Bid bid_max(Bid a, Bid b) {
    if (a.zero()) return b;
    if (b.zero()) return a;
    return {std::max(a.u, b.u), std::max(a.v, b.v)};
}

// --------------------------------------------------------------------------
// row-streamed exact evaluation on tensor grids

using Univariate = std::vector<std::pair<int, Rational>>; // (exponent, coeff)

Univariate restrict_to_row(const BivariatePoly& p, const Rational& u0) {
    BivariatePoly r = p.eval_partial_u(u0);
    Univariate q;
    q.reserve(r.terms().size());
    for (const auto& [m, c] : r.terms()) q.emplace_back(m.v, c);
    return q;
}

std::vector<std::vector<Rational>> power_table(const std::vector<Rational>& vs, int maxdeg) {
    std::vector<std::vector<Rational>> t(vs.size());
    for (size_t b = 0; b < vs.size(); ++b) {
        t[b].resize(maxdeg + 1);
        t[b][0] = 1;
        for (int j = 1; j <= maxdeg; ++j) t[b][j] = t[b][j - 1] * vs[b];
    }
    return t;
}

Rational eval_univariate(const Univariate& q, const std::vector<Rational>& vpow) {
    Rational acc(0);
    for (const auto& [j, c] : q) acc += c * vpow[j];
    return acc;
}

// The polynomials an exact patch sample needs, differentiated once up front.
struct PatchPolys {
    std::array<BivariatePoly, 3> X, Xu, Xv, N, Nu, Nv;
    BivariatePoly delta, delta_u, delta_v, W, Wu, Wv, H, Hu, Hv;

    explicit PatchPolys(const PnPatch& p) {
        for (int k = 0; k < 3; ++k) {
            X[k] = p.point_num[k];
            Xu[k] = X[k].diff_u();
            Xv[k] = X[k].diff_v();
            N[k] = p.normal_num[k];
            Nu[k] = N[k].diff_u();
            Nv[k] = N[k].diff_v();
        }
        delta = p.point_den;
        delta_u = delta.diff_u();
        delta_v = delta.diff_v();
        W = p.nh_den;
        Wu = W.diff_u();
        Wv = W.diff_v();
        H = p.support_num;
        Hu = H.diff_u();
        Hv = H.diff_v();
    }
};

} // namespace

std::vector<ExactSample> exact_samples(const PnPatch& p, const std::vector<Rational>& us,
                                       const std::vector<Rational>& vs) {
    PatchPolys polys(p);
    int maxdeg = 0;
    auto track = [&](const BivariatePoly& q) { maxdeg = std::max(maxdeg, q.bidegree().second); };
    for (int k = 0; k < 3; ++k) {
        track(polys.X[k]);
        track(polys.N[k]);
    }
    track(polys.delta);
    track(polys.W);
    auto vpow = power_table(vs, std::max(maxdeg, 0));

    std::vector<ExactSample> out;
    out.reserve(us.size() * vs.size());
    for (const Rational& u : us) {
        std::array<Univariate, 3> rX, rXu, rXv, rN, rNu, rNv;
        for (int k = 0; k < 3; ++k) {
            rX[k] = restrict_to_row(polys.X[k], u);
            rXu[k] = restrict_to_row(polys.Xu[k], u);
            rXv[k] = restrict_to_row(polys.Xv[k], u);
            rN[k] = restrict_to_row(polys.N[k], u);
            rNu[k] = restrict_to_row(polys.Nu[k], u);
            rNv[k] = restrict_to_row(polys.Nv[k], u);
        }
        Univariate rd = restrict_to_row(polys.delta, u);
        Univariate rdu = restrict_to_row(polys.delta_u, u);
        Univariate rdv = restrict_to_row(polys.delta_v, u);
        Univariate rW = restrict_to_row(polys.W, u);
        Univariate rWu = restrict_to_row(polys.Wu, u);
        Univariate rWv = restrict_to_row(polys.Wv, u);
        Univariate rH = restrict_to_row(polys.H, u);

        for (size_t b = 0; b < vs.size(); ++b) {
            ExactSample s;
            s.u = u;
            s.v = vs[b];
            const auto& pw = vpow[b];

            Rational dval = eval_univariate(rd, pw);
            Rational wval = eval_univariate(rW, pw);
            Vec3Q Xval, Xuval, Xvval, Nval, Nuval, Nvval;
            for (int k = 0; k < 3; ++k) {
                Xval[k] = eval_univariate(rX[k], pw);
                Xuval[k] = eval_univariate(rXu[k], pw);
                Xvval[k] = eval_univariate(rXv[k], pw);
                Nval[k] = eval_univariate(rN[k], pw);
                Nuval[k] = eval_univariate(rNu[k], pw);
                Nvval[k] = eval_univariate(rNv[k], pw);
            }
            Rational duval = eval_univariate(rdu, pw);
            Rational dvval = eval_univariate(rdv, pw);
            Rational wuval = eval_univariate(rWu, pw);
            Rational wvval = eval_univariate(rWv, pw);
            Rational hval = eval_univariate(rH, pw);

            s.n = (1 / wval) * Nval;
            s.h = hval / wval;
            Rational w2 = wval * wval;
            Vec3Q A = wval * Nuval - wuval * Nval;
            Vec3Q B = wval * Nvval - wvval * Nval;
            s.nu = (1 / w2) * A;
            s.nv = (1 / w2) * B;

            if (dval == 0) {
                s.pole = true;
                out.push_back(std::move(s));
                continue;
            }
            s.x = (1 / dval) * Xval;
            Rational d2 = dval * dval;
            Vec3Q P = dval * Xuval - duval * Xval;
            Vec3Q Q = dval * Xvval - dvval * Xval;
            s.xu = (1 / d2) * P;
            s.xv = (1 / d2) * Q;

            Rational det_g_num = dot(cross(A, B), Nval); // detG * W^5
            if (det_g_num == 0) {
                s.gauss_degenerate = true;
            } else {
                Rational det_f_num = dot(cross(P, Q), Nval); // detF * delta^4 W
                Rational w4 = w2 * w2;
                s.det_ratio = det_f_num * w4 / (d2 * d2 * det_g_num);
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

ExactSample exact_sample(const PnPatch& p, const Rational& u, const Rational& v) {
    return exact_samples(p, {u}, {v}).front();
}

// --------------------------------------------------------------------------
// PN verification

namespace {

struct VerifyChunkResult {
    bool pole_hit = false;
    std::optional<std::pair<size_t, size_t>> witness;
};

} // namespace

PnCertificate verify_pn(const PnPatch& p, const std::string& patch_id, int threads) {
    PatchPolys polys(p);

    Bid bp, bq;
    Bid bd = bid_of(polys.delta), bdu = bid_of(polys.delta_u), bdv = bid_of(polys.delta_v);
    for (int k = 0; k < 3; ++k) {
        Bid bx = bid_of(polys.X[k]);
        bp = bid_max(bp, bid_max(bid_add(bid_of(polys.Xu[k]), bd), bid_add(bx, bdu)));
        bq = bid_max(bq, bid_max(bid_add(bid_of(polys.Xv[k]), bd), bid_add(bx, bdv)));
    }
    Bid bn;
    for (int k = 0; k < 3; ++k) bn = bid_max(bn, bid_of(polys.N[k]));
    Bid bw = bid_of(polys.W);
    Bid bcross = bid_add(bp, bq);
    Bid lhs = bid_add(bid_add(bcross, bcross), bid_add(bw, bw));
    Bid rhs = bid_add(bid_add(bcross, bn), bid_add(bcross, bn));
    Bid bound = bid_max(lhs, rhs);

    PnCertificate cert;
    cert.patch_id = patch_id;
    cert.grid_u = std::max(bound.u, 0) + 1;
    cert.grid_v = std::max(bound.v, 0) + 1;

    if (threads <= 0)
        threads = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));

    // retry offsets in case a node lands on a pole of the point field
    const Rational offsets[] = {Rational(0), frac(1, 2), frac(1, 3),
                                frac(2, 3), frac(1, 5), frac(3, 7)};
    for (const Rational& off : offsets) {
        std::vector<Rational> us(cert.grid_u), vs(cert.grid_v);
        for (int a = 0; a < cert.grid_u; ++a) us[a] = Rational(a + 1) + off;
        for (int b = 0; b < cert.grid_v; ++b) vs[b] = Rational(b + 1) + off;

        int maxdeg = 0;
        for (int k = 0; k < 3; ++k)
            maxdeg = std::max({maxdeg, polys.X[k].bidegree().second,
                               polys.N[k].bidegree().second});
        maxdeg = std::max({maxdeg, polys.delta.bidegree().second, polys.W.bidegree().second});
        auto vpow = power_table(vs, std::max(maxdeg, 0));

        auto run_rows = [&](int a0, int a1) -> VerifyChunkResult {
            VerifyChunkResult res;
            for (int a = a0; a < a1 && !res.pole_hit && !res.witness; ++a) {
                const Rational& u = us[a];
                std::array<Univariate, 3> rX, rXu, rXv, rN;
                for (int k = 0; k < 3; ++k) {
                    rX[k] = restrict_to_row(polys.X[k], u);
                    rXu[k] = restrict_to_row(polys.Xu[k], u);
                    rXv[k] = restrict_to_row(polys.Xv[k], u);
                    rN[k] = restrict_to_row(polys.N[k], u);
                }
                Univariate rd = restrict_to_row(polys.delta, u);
                Univariate rdu = restrict_to_row(polys.delta_u, u);
                Univariate rdv = restrict_to_row(polys.delta_v, u);
                Univariate rW = restrict_to_row(polys.W, u);

                for (size_t b = 0; b < vs.size(); ++b) {
                    const auto& pw = vpow[b];
                    Rational dval = eval_univariate(rd, pw);
                    if (dval == 0) {
                        res.pole_hit = true;
                        break;
                    }
                    Rational duval = eval_univariate(rdu, pw);
                    Rational dvval = eval_univariate(rdv, pw);
                    Rational wval = eval_univariate(rW, pw);
                    Vec3Q P, Q, Nval;
                    for (int k = 0; k < 3; ++k) {
                        Rational xk = eval_univariate(rX[k], pw);
                        P[k] = eval_univariate(rXu[k], pw) * dval - xk * duval;
                        Q[k] = eval_univariate(rXv[k], pw) * dval - xk * dvval;
                        Nval[k] = eval_univariate(rN[k], pw);
                    }
                    Vec3Q C = cross(P, Q);
                    Rational sigma = dot(C, Nval);
                    // ||C||^2 W^2 == (C.N)^2  <=>  PN identity at this node
                    if (dot(C, C) * wval * wval != sigma * sigma) {
                        res.witness = {static_cast<size_t>(a), b};
                        break;
                    }
                }
            }
            return res;
        };

        std::vector<std::future<VerifyChunkResult>> futs;
        int chunk = (cert.grid_u + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int a0 = t * chunk, a1 = std::min(cert.grid_u, (t + 1) * chunk);
            if (a0 >= a1) break;
            futs.push_back(std::async(std::launch::async, run_rows, a0, a1));
        }
        bool pole_hit = false;
        std::optional<std::pair<size_t, size_t>> witness;
        for (auto& f : futs) {
            VerifyChunkResult r = f.get();
            pole_hit = pole_hit || r.pole_hit;
            if (r.witness && (!witness || *r.witness < *witness)) witness = r.witness;
        }
        if (pole_hit) continue; // shift the grid away from the pole
        if (witness) {
            cert.exact_pn = false;
            cert.witness = {us[witness->first], vs[witness->second]};
        } else {
            cert.exact_pn = true;
        }
        return cert;
    }
    throw Error(ErrorCode::globally_degenerate,
                "could not place a pole-free certifying grid for patch " + patch_id);
}

// --------------------------------------------------------------------------
// G1 continuity

namespace {

struct EdgeRestriction {
    std::array<Univariate, 3> X, N;
    Univariate delta, W;
    int maxdeg = 0;
};

Univariate to_univariate(const BivariatePoly& p, bool from_v) {
    // assumes p depends on a single variable already
    Univariate q;
    for (const auto& [m, c] : p.terms()) q.emplace_back(from_v ? m.v : m.u, c);
    std::sort(q.begin(), q.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return q;
}

EdgeRestriction restrict_edge(const PnPatch& p, EdgeSide side) {
    auto restrict_poly = [&](const BivariatePoly& q) -> Univariate {
        switch (side) {
        case EdgeSide::u0: return to_univariate(q.eval_partial_u(Rational(0)), true);
        case EdgeSide::u1: return to_univariate(q.eval_partial_u(Rational(1)), true);
        case EdgeSide::v0: return to_univariate(q.eval_partial_v(Rational(0)), false);
        case EdgeSide::v1: return to_univariate(q.eval_partial_v(Rational(1)), false);
        }
        return {};
    };
    EdgeRestriction r;
    for (int k = 0; k < 3; ++k) {
        r.X[k] = restrict_poly(p.point_num[k]);
        r.N[k] = restrict_poly(p.normal_num[k]);
    }
    r.delta = restrict_poly(p.point_den);
    r.W = restrict_poly(p.nh_den);
    for (int k = 0; k < 3; ++k) {
        for (const auto& [e, c] : r.X[k]) r.maxdeg = std::max(r.maxdeg, e);
        for (const auto& [e, c] : r.N[k]) r.maxdeg = std::max(r.maxdeg, e);
    }
    for (const auto& [e, c] : r.delta) r.maxdeg = std::max(r.maxdeg, e);
    for (const auto& [e, c] : r.W) r.maxdeg = std::max(r.maxdeg, e);
    return r;
}

} // namespace

G1Report check_g1(const PnPatch& pa, EdgeSide ea, const PnPatch& pb, EdgeSide eb, int samples,
                  double tol) {
    EdgeRestriction ra = restrict_edge(pa, ea);
    EdgeRestriction rb = restrict_edge(pb, eb);

    G1Report rep;
    rep.samples = samples;
    rep.positions_exact = true;
    rep.normals_exact = true;

    std::vector<Rational> ts(samples);
    for (int k = 0; k < samples; ++k) ts[k] = frac(k, std::max(samples - 1, 1));
    auto tpow = power_table(ts, std::max(ra.maxdeg, rb.maxdeg));

    for (int k = 0; k < samples; ++k) {
        const auto& pw = tpow[k];
        Rational da = eval_univariate(ra.delta, pw);
        Rational db = eval_univariate(rb.delta, pw);
        Rational wa = eval_univariate(ra.W, pw);
        Rational wb = eval_univariate(rb.W, pw);
        if (da == 0 || db == 0) {
            rep.positions_exact = false;
            rep.max_position_deviation = std::numeric_limits<double>::infinity();
            continue;
        }
        Vec3Q xa, xb, na, nb;
        for (int c = 0; c < 3; ++c) {
            xa[c] = eval_univariate(ra.X[c], pw);
            xb[c] = eval_univariate(rb.X[c], pw);
            na[c] = eval_univariate(ra.N[c], pw);
            nb[c] = eval_univariate(rb.N[c], pw);
        }
        // cross-multiplied exact comparisons
        bool pos_eq = (db * xa) == (da * xb);
        bool nrm_eq = (wb * na) == (wa * nb);
        if (!pos_eq) {
            rep.positions_exact = false;
            Vec3d d = to_double((1 / da) * xa) - to_double((1 / db) * xb);
            rep.max_position_deviation = std::max(rep.max_position_deviation, norm(d));
        }
        if (!nrm_eq) rep.normals_exact = false;
        Vec3d nda = to_double((1 / wa) * na);
        Vec3d ndb = to_double((1 / wb) * nb);
        double cosang = dot(nda, ndb) / (norm(nda) * norm(ndb));
        double ang = std::acos(std::clamp(cosang, -1.0, 1.0));
        rep.max_normal_angle = std::max(rep.max_normal_angle, ang);
    }
    rep.pass = rep.positions_exact && rep.max_normal_angle <= tol;
    return rep;
}

G1Report check_g1_cells(const PnPatch& pa, std::pair<int, int> cell_a, const PnPatch& pb,
                        std::pair<int, int> cell_b, int samples, double tol) {
    int dr = cell_b.first - cell_a.first;
    int dc = cell_b.second - cell_a.second;
    if (dr == 0 && dc == 1) return check_g1(pa, EdgeSide::v1, pb, EdgeSide::v0, samples, tol);
    if (dr == 0 && dc == -1) return check_g1(pa, EdgeSide::v0, pb, EdgeSide::v1, samples, tol);
    if (dr == 1 && dc == 0) return check_g1(pa, EdgeSide::u1, pb, EdgeSide::u0, samples, tol);
    if (dr == -1 && dc == 0) return check_g1(pa, EdgeSide::u0, pb, EdgeSide::u1, samples, tol);
    if (dr == 0 && dc == 0) return check_g1(pa, EdgeSide::u0, pb, EdgeSide::u0, samples, tol);
    throw Error(ErrorCode::non_adjacent,
                "cells (" + std::to_string(cell_a.first) + "," + std::to_string(cell_a.second) +
                    ") and (" + std::to_string(cell_b.first) + "," +
                    std::to_string(cell_b.second) + ") share no edge");
}

// --------------------------------------------------------------------------
// curvature / ridges

namespace {

void eigen2(double m00, double m01, double m10, double m11, double& l1, double& l2) {
    double tr = m00 + m11;
    double det = m00 * m11 - m01 * m10;
    double disc = tr * tr - 4 * det;
    if (disc < 0) disc = 0; // the radius matrix is symmetric up to roundoff
    double root = std::sqrt(disc);
    l1 = (tr + root) / 2;
    l2 = (tr - root) / 2;
}

void tangent_basis(const Vec3d& n, Vec3d& e1, Vec3d& e2) {
    Vec3d axis = std::fabs(n.x) <= std::fabs(n.y) && std::fabs(n.x) <= std::fabs(n.z)
                     ? Vec3d{1, 0, 0}
                     : (std::fabs(n.y) <= std::fabs(n.z) ? Vec3d{0, 1, 0} : Vec3d{0, 0, 1});
    e1 = cross(n, axis);
    double l = norm(e1);
    e1 = (1.0 / l) * e1;
    e2 = cross(n, e1);
}

} // namespace

CurvatureField sample_curvature(const PnPatch& p, int res) {
    CurvatureField field;
    field.res_u = res;
    field.res_v = res;

    std::vector<Rational> us(res), vs(res);
    for (int a = 0; a < res; ++a) us[a] = frac(a, std::max(res - 1, 1));
    for (int b = 0; b < res; ++b) vs[b] = frac(b, std::max(res - 1, 1));
    std::vector<ExactSample> samples = exact_samples(p, us, vs);

    field.samples.resize(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        const ExactSample& s = samples[i];
        CurvatureSample& c = field.samples[i];
        c.u = to_double(s.u);
        c.v = to_double(s.v);
        if (s.pole || s.gauss_degenerate) {
            c.degenerate = true;
            continue;
        }
        c.det_ratio = to_double(s.det_ratio);
        c.det_sign = sgn(s.det_ratio);
        c.gauss_k = 1.0 / c.det_ratio;

        Vec3d n = to_double(s.n);
        Vec3d e1, e2;
        tangent_basis(n, e1, e2);
        Vec3d nu = to_double(s.nu), nv = to_double(s.nv);
        Vec3d xu = to_double(s.xu), xv = to_double(s.xv);
        double g00 = dot(e1, nu), g01 = dot(e1, nv), g10 = dot(e2, nu), g11 = dot(e2, nv);
        double f00 = dot(e1, xu), f01 = dot(e1, xv), f10 = dot(e2, xu), f11 = dot(e2, xv);
        double dg = g00 * g11 - g01 * g10;
        // M = F G^{-1}
        double m00 = (f00 * g11 - f01 * g10) / dg;
        double m01 = (-f00 * g01 + f01 * g00) / dg;
        double m10 = (f10 * g11 - f11 * g10) / dg;
        double m11 = (-f10 * g01 + f11 * g00) / dg;
        eigen2(m00, m01, m10, m11, c.eig1, c.eig2);
    }
    return field;
}

RidgeReport detect_ridges(const CurvatureField& field, double eps_rel) {
    RidgeReport rep;

    std::vector<double> mags;
    for (const auto& s : field.samples)
        if (!s.degenerate) mags.push_back(std::fabs(s.det_ratio));
    double median = 0;
    if (!mags.empty()) {
        std::sort(mags.begin(), mags.end());
        median = mags[mags.size() / 2];
    }
    rep.eps_used = eps_rel * median;

    auto sign_of = [](double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };

    for (int a = 0; a < field.res_u; ++a) {
        for (int b = 0; b < field.res_v; ++b) {
            const CurvatureSample& s = field.at(a, b);
            if (s.degenerate) {
                rep.flags.push_back({a, b, "degenerate"});
                continue;
            }
            if (std::fabs(s.det_ratio) < rep.eps_used || s.det_sign == 0) {
                rep.flags.push_back({a, b, "near-zero"});
                continue;
            }
            // eigenvalue sign change against right and down neighbours
            const int da[2] = {1, 0}, db[2] = {0, 1};
            for (int k = 0; k < 2; ++k) {
                int a2 = a + da[k], b2 = b + db[k];
                if (a2 >= field.res_u || b2 >= field.res_v) continue;
                const CurvatureSample& t = field.at(a2, b2);
                if (t.degenerate) continue;
                if (sign_of(s.eig1) * sign_of(t.eig1) < 0 ||
                    sign_of(s.eig2) * sign_of(t.eig2) < 0) {
                    rep.flags.push_back({a, b, "eigen-sign-change"});
                    break;
                }
            }
        }
    }
    return rep;
}

// --------------------------------------------------------------------------
// double-precision pipeline straight from the isotropic patch

namespace {

struct IsoPatchEval {
    PolyVec3 y, yu, yv, yuu, yuv, yvv;

    explicit IsoPatchEval(const PolyVec3& patch)
        : y(patch), yu(patch.diff_u()), yv(patch.diff_v()), yuu(yu.diff_u()), yuv(yu.diff_v()),
          yvv(yv.diff_v()) {}

    IsoSampleD sample(double u, double v, double offset) const;
};

Vec3d eval_d(const PolyVec3& p, double u, double v) {
    return {p.x.eval_double(u, v), p.y.eval_double(u, v), p.z.eval_double(u, v)};
}

bool solve3d(const Vec3d& r0, const Vec3d& r1, const Vec3d& r2, const Vec3d& b, Vec3d& out) {
    double det = r0.x * (r1.y * r2.z - r1.z * r2.y) - r0.y * (r1.x * r2.z - r1.z * r2.x) +
                 r0.z * (r1.x * r2.y - r1.y * r2.x);
    if (det == 0 || !std::isfinite(det)) return false;
    auto det_repl = [&](int col) {
        Vec3d a = r0, c = r1, d = r2;
        (col == 0 ? a.x : col == 1 ? a.y : a.z) = b.x;
        (col == 0 ? c.x : col == 1 ? c.y : c.z) = b.y;
        (col == 0 ? d.x : col == 1 ? d.y : d.z) = b.z;
        return a.x * (c.y * d.z - c.z * d.y) - a.y * (c.x * d.z - c.z * d.x) +
               a.z * (c.x * d.y - c.y * d.x);
    };
    out = {det_repl(0) / det, det_repl(1) / det, det_repl(2) / det};
    return std::isfinite(out.x) && std::isfinite(out.y) && std::isfinite(out.z);
}

IsoSampleD IsoPatchEval::sample(double u, double v, double offset) const {
    IsoSampleD s;
    Vec3d Y = eval_d(y, u, v), Yu = eval_d(yu, u, v), Yv = eval_d(yv, u, v);
    Vec3d Yuu = eval_d(yuu, u, v), Yuv = eval_d(yuv, u, v), Yvv = eval_d(yvv, u, v);

    double W = 1 + Y.x * Y.x + Y.y * Y.y;
    double Wu = 2 * (Y.x * Yu.x + Y.y * Yu.y);
    double Wv = 2 * (Y.x * Yv.x + Y.y * Yv.y);
    double Wuu = 2 * (Yu.x * Yu.x + Y.x * Yuu.x + Yu.y * Yu.y + Y.y * Yuu.y);
    double Wuv = 2 * (Yu.x * Yv.x + Y.x * Yuv.x + Yu.y * Yv.y + Y.y * Yuv.y);
    double Wvv = 2 * (Yv.x * Yv.x + Y.x * Yvv.x + Yv.y * Yv.y + Y.y * Yvv.y);

    Vec3d N{2 * Y.x, 2 * Y.y, W - 2};
    Vec3d Nu{2 * Yu.x, 2 * Yu.y, Wu}, Nv{2 * Yv.x, 2 * Yv.y, Wv};
    Vec3d Nuu{2 * Yuu.x, 2 * Yuu.y, Wuu}, Nuv{2 * Yuv.x, 2 * Yuv.y, Wuv},
        Nvv{2 * Yvv.x, 2 * Yvv.y, Wvv};
    double H = 2 * Y.z, Hu = 2 * Yu.z, Hv = 2 * Yv.z;
    double Huu = 2 * Yuu.z, Huv = 2 * Yuv.z, Hvv = 2 * Yvv.z;

    double iw = 1 / W;
    Vec3d n = iw * N;
    Vec3d nu = iw * (Nu - Wu * n);
    Vec3d nv = iw * (Nv - Wv * n);
    Vec3d nuu = iw * (Nuu - 2 * Wu * nu - Wuu * n);
    Vec3d nuv = iw * (Nuv - Wu * nv - Wv * nu - Wuv * n);
    Vec3d nvv = iw * (Nvv - 2 * Wv * nv - Wvv * n);
    double h = H * iw;
    double hu = (Hu - Wu * h) * iw;
    double hv = (Hv - Wv * h) * iw;
    double huu = (Huu - 2 * Wu * hu - Wuu * h) * iw;
    double huv = (Huv - Wu * hv - Wv * hu - Wuv * h) * iw;
    double hvv = (Hvv - 2 * Wv * hv - Wvv * h) * iw;

    Vec3d x;
    if (!solve3d(n, nu, nv, {h, hu, hv}, x)) return s;
    Vec3d bu{hu - dot(nu, x), huu - dot(nuu, x), huv - dot(nuv, x)};
    Vec3d bv{hv - dot(nv, x), huv - dot(nuv, x), hvv - dot(nvv, x)};
    Vec3d xu, xv;
    if (!solve3d(n, nu, nv, bu, xu) || !solve3d(n, nu, nv, bv, xv)) return s;

    if (offset != 0) {
        x = x + offset * n;
        xu = xu + offset * nu;
        xv = xv + offset * nv;
        h += offset;
    }

    s.x = x;
    s.n = n;
    s.xu = xu;
    s.xv = xv;
    s.nu = nu;
    s.nv = nv;
    s.h = h;
    s.det_f = dot(cross(xu, xv), n);
    s.det_g = dot(cross(nu, nv), n);
    s.ok = std::isfinite(s.det_f) && std::isfinite(s.det_g);
    return s;
}

} // namespace

IsoSampleD sample_iso_double(const PolyVec3& y, double u, double v, double offset) {
    return IsoPatchEval(y).sample(u, v, offset);
}

ObjectiveValue network_objective(const CoonsNetwork& nw, int res) {
    ObjectiveValue obj;
    double cell = 1.0 / res;
    bool blown = false;
    for (const CoonsPatch& patch : nw.patches) {
        IsoPatchEval ev(patch.surface);
        for (int a = 0; a < res; ++a) {
            for (int b = 0; b < res; ++b) {
                double u = (a + 0.5) * cell, v = (b + 0.5) * cell;
                IsoSampleD s = ev.sample(u, v, 0);
                double contrib = std::numeric_limits<double>::quiet_NaN();
                if (s.ok && s.det_f != 0) {
                    double k = s.det_g / s.det_f;
                    contrib = k * k * norm(cross(s.nu, s.nv)) * cell * cell;
                }
                if (!std::isfinite(contrib)) {
                    ++obj.bad_samples;
                    blown = true;
                } else {
                    obj.value += contrib;
                }
            }
        }
    }
    if (blown) obj.value = std::numeric_limits<double>::infinity();
    return obj;
}

// --------------------------------------------------------------------------
// tangent-scale optimization

namespace {

double scales_objective(const HermiteGrid& g, const std::vector<std::array<Rational, 2>>& scales,
                        int quad_res) {
    HermiteGrid trial = g;
    trial.tangent_scales = scales;
    CoonsNetwork nw = build_network(trial);
    return network_objective(nw, quad_res).value;
}

} // namespace

OptimizeResult optimize_tangent_scales(const HermiteGrid& g, double lo, double hi, int budget,
                                       int quad_res) {
    if (lo > hi || lo <= 0)
        throw Error(ErrorCode::parse, "invalid scale bounds");

    OptimizeResult result;
    int evals = 0;
    auto eval = [&](const std::vector<std::array<Rational, 2>>& s) {
        ++evals;
        return scales_objective(g, s, quad_res);
    };

    std::vector<std::array<Rational, 2>> best = g.tangent_scales;
    double best_val = eval(best);
    result.objective_before = best_val;

    auto clampq = [&](const Rational& s) {
        double d = to_double(s);
        d = std::clamp(d, lo, hi);
        return rationalize(d, 1e-12);
    };

    // deterministic seeds: clamped current scales and all-ones
    std::vector<std::vector<std::array<Rational, 2>>> seeds;
    {
        std::vector<std::array<Rational, 2>> clamped = best;
        for (auto& s : clamped) {
            s[0] = clampq(s[0]);
            s[1] = clampq(s[1]);
        }
        seeds.push_back(clamped);
        Rational one = clampq(Rational(1));
        seeds.push_back(
            std::vector<std::array<Rational, 2>>(best.size(), {one, one}));
    }
    for (const auto& seed : seeds) {
        if (evals >= budget) break;
        double val = eval(seed);
        if (val < best_val) {
            best_val = val;
            best = seed;
        }
    }

    // coordinate descent with golden-section line searches
    const double gr = (std::sqrt(5.0) - 1) / 2;
    bool improved = true;
    while (improved && evals < budget && lo < hi) {
        improved = false;
        for (size_t i = 0; i < best.size() * 2 && evals < budget; ++i) {
            size_t pt = i / 2;
            int comp = static_cast<int>(i % 2);
            double a = lo, b = hi;
            double c = b - gr * (b - a), d = a + gr * (b - a);
            auto with = [&](double s) {
                auto cand = best;
                cand[pt][comp] = rationalize(s, 1e-12);
                return cand;
            };
            auto cand_c = with(c), cand_d = with(d);
            double fc = eval(cand_c);
            if (evals >= budget) {
                if (fc < best_val) { best_val = fc; best = cand_c; improved = true; }
                break;
            }
            double fd = eval(cand_d);
            for (int it = 0; it < 4 && evals < budget; ++it) {
                if (fc < fd) {
                    b = d; d = c; fd = fc;
                    c = b - gr * (b - a);
                    cand_c = with(c);
                    fc = eval(cand_c);
                } else {
                    a = c; c = d; fc = fd;
                    d = a + gr * (b - a);
                    cand_d = with(d);
                    fd = eval(cand_d);
                }
            }
            double fbest_line = std::min(fc, fd);
            auto cand_best = fc <= fd ? cand_c : cand_d;
            if (fbest_line < best_val - 1e-15 * std::fabs(best_val)) {
                best_val = fbest_line;
                best = cand_best;
                improved = true;
            }
        }
    }

    result.scales = best;
    result.objective_after = best_val;
    result.evaluations = evals;
    result.budget_exhausted = evals >= budget && improved;
    return result;
}

// --------------------------------------------------------------------------
// tessellation

Mesh tessellate(const PnPatch& p, int res) {
    Mesh mesh;
    int nu = res + 1, nv = res + 1;
    std::vector<int> vid(static_cast<size_t>(nu) * nv, -1);

    // first pass: denominator magnitudes to pick a relative pole threshold
    std::vector<double> dvals(static_cast<size_t>(nu) * nv);
    double dmax = 0;
    for (int a = 0; a < nu; ++a) {
        for (int b = 0; b < nv; ++b) {
            double u = static_cast<double>(a) / res, v = static_cast<double>(b) / res;
            double d = p.point_den.eval_double(u, v);
            dvals[a * nv + b] = d;
            dmax = std::max(dmax, std::fabs(d));
        }
    }
    double eps = dmax * 1e-12;

    for (int a = 0; a < nu; ++a) {
        for (int b = 0; b < nv; ++b) {
            double u = static_cast<double>(a) / res, v = static_cast<double>(b) / res;
            double d = dvals[a * nv + b];
            if (!(std::fabs(d) > eps)) {
                mesh.skipped.emplace_back(a, b);
                continue;
            }
            Vec3d x{p.point_num.x.eval_double(u, v) / d, p.point_num.y.eval_double(u, v) / d,
                    p.point_num.z.eval_double(u, v) / d};
            double w = p.nh_den.eval_double(u, v);
            Vec3d n{p.normal_num.x.eval_double(u, v) / w, p.normal_num.y.eval_double(u, v) / w,
                    p.normal_num.z.eval_double(u, v) / w};
            if (!std::isfinite(x.x) || !std::isfinite(x.y) || !std::isfinite(x.z)) {
                mesh.skipped.emplace_back(a, b);
                continue;
            }
            vid[a * nv + b] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(x);
            mesh.normals.push_back(n);
        }
    }

    for (int a = 0; a < res; ++a) {
        for (int b = 0; b < res; ++b) {
            int v00 = vid[a * nv + b], v10 = vid[(a + 1) * nv + b];
            int v01 = vid[a * nv + b + 1], v11 = vid[(a + 1) * nv + b + 1];
            if (v00 >= 0 && v10 >= 0 && v11 >= 0) mesh.triangles.push_back({v00, v10, v11});
            if (v00 >= 0 && v11 >= 0 && v01 >= 0) mesh.triangles.push_back({v00, v11, v01});
        }
    }
    return mesh;
}

} // namespace pnsurf
