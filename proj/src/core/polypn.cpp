#include "polypn.hpp"

#include <string>

namespace pnsurf {

namespace {

int total_degree(const PolyVec3& n) {
    int d = -1;
    for (int k = 0; k < 3; ++k) d = std::max(d, n[k].total_degree());
    return d;
}

// monomials u^i v^j with i+j <= deg, graded-lex (degree asc, u desc)
std::vector<Mono> monomials_upto(int deg) {
    std::vector<Mono> out;
    for (int d = 0; d <= deg; ++d)
        for (int i = d; i >= 0; --i) out.push_back({i, d - i});
    return out;
}

} // namespace

PythagoreanField check_pythagorean(const PolyVec3& n) {
    if (n.x.is_zero() && n.y.is_zero() && n.z.is_zero())
        throw Error(ErrorCode::zero_normal, "zero normal field");
    BivariatePoly len2 = dot(n, n);
    auto root = len2.sqrt();
    if (!root) {
        Mono lm = len2.leading_mono_grlex();
        throw Error(ErrorCode::not_pythagorean,
                    "||N||^2 is not a perfect square (leading residual term u^" +
                        std::to_string(lm.u) + " v^" + std::to_string(lm.v) + ")");
    }
    return {n, *root, total_degree(n)};
}

PnSystem build_pn_system(const PolyVec3& n, int ell) {
    if (ell < 1) throw Error(ErrorCode::parse, "ell must be >= 1");
    PnSystem sys;
    sys.k = total_degree(n);
    sys.ell = ell;

    std::vector<Mono> unknowns = monomials_upto(ell);
    for (int block = 0; block < 6; ++block)
        for (const Mono& m : unknowns) sys.columns.emplace_back(block, m);
    sys.cols = sys.columns.size();

    std::vector<Mono> prod_monos = monomials_upto(sys.k + ell);
    std::vector<Mono> integ_monos = monomials_upto(ell - 1);
    sys.rows = 2 * prod_monos.size() + 3 * integ_monos.size();
    sys.matrix.assign(sys.rows, QVector(sys.cols, Rational(0)));

    size_t ncolsper = unknowns.size();
    auto col_index = [&](int block, size_t mono_idx) { return block * ncolsper + mono_idx; };

    // P.N = 0 and Q.N = 0 coefficient rows
    size_t row = 0;
    for (int which = 0; which < 2; ++which) {
        for (const Mono& pm : prod_monos) {
            for (int s = 0; s < 3; ++s) {
                for (size_t mi = 0; mi < unknowns.size(); ++mi) {
                    const Mono& um = unknowns[mi];
                    if (um.u > pm.u || um.v > pm.v) continue;
                    Rational c = n[s].coeff(pm.u - um.u, pm.v - um.v);
                    if (c != 0) sys.matrix[row][col_index(which * 3 + s, mi)] = c;
                }
            }
            ++row;
        }
    }
    // dP/dv - dQ/du = 0, componentwise
    for (int s = 0; s < 3; ++s) {
        for (const Mono& im : integ_monos) {
            for (size_t mi = 0; mi < unknowns.size(); ++mi) {
                const Mono& um = unknowns[mi];
                if (um.u == im.u && um.v == im.v + 1)
                    sys.matrix[row][col_index(s, mi)] = Rational(im.v + 1);
                if (um.u == im.u + 1 && um.v == im.v)
                    sys.matrix[row][col_index(3 + s, mi)] = Rational(-(im.u + 1));
            }
            ++row;
        }
    }
    return sys;
}

PolyVec3 integrate_pair(const PolyVec3& p, const PolyVec3& q) {
    PolyVec3 ipu{p.x.integrate_u(), p.y.integrate_u(), p.z.integrate_u()};
    PolyVec3 iqv{q.x.integrate_v(), q.y.integrate_v(), q.z.integrate_v()};
    PolyVec3 x = ipu;
    for (int k = 0; k < 3; ++k) {
        BivariatePoly c = (iqv[k] - ipu[k]).eval_partial_u(Rational(0));
        x[k] += c;
    }
    return x;
}

PnSolveResult solve_pn_system(const PolyVec3& n, int ell) {
    PnSolveResult res;
    res.system = build_pn_system(n, ell);
    std::vector<QVector> basis = nullspace(res.system.matrix);
    res.nullspace_dim = basis.size();

    size_t per_block = res.system.columns.size() / 6;
    std::vector<Mono> unknowns = monomials_upto(ell);

    for (const QVector& vec : basis) {
        PolyVec3 p, q;
        for (int s = 0; s < 3; ++s) {
            for (size_t mi = 0; mi < per_block; ++mi) {
                p[s].set_coeff(unknowns[mi].u, unknowns[mi].v, vec[s * per_block + mi]);
                q[s].set_coeff(unknowns[mi].u, unknowns[mi].v, vec[(3 + s) * per_block + mi]);
            }
        }
        PolyVec3 cr = cross(p, q);
        if (cr.x.is_zero() && cr.y.is_zero() && cr.z.is_zero()) {
            ++res.degenerate_pairs;
            continue;
        }
        PolyVec3 x = integrate_pair(p, q);
        if (!(x.diff_u() == p) || !(x.diff_v() == q))
            throw Error(ErrorCode::internal, "integrated surface does not reproduce (P, Q)");

        // cross(P,Q) is parallel to N; extract the polynomial multiplier
        std::optional<BivariatePoly> f;
        for (int s = 0; s < 3 && !f; ++s) {
            if (n[s].is_zero() || cr[s].is_zero()) continue;
            if (auto quot = cr[s].divide_exact(n[s])) f = quot;
        }
        if (!f) {
            ++res.degenerate_pairs;
            continue;
        }
        bool consistent = true;
        for (int s = 0; s < 3; ++s)
            if (!(cr[s] == (*f) * n[s])) consistent = false;
        if (!consistent) {
            ++res.degenerate_pairs;
            continue;
        }
        res.surfaces.push_back({x, p, q, *f});
    }

    if (res.surfaces.empty())
        throw Error(ErrorCode::empty_solution,
                    "nullspace of dimension " + std::to_string(res.nullspace_dim) +
                        " contains no pair with cross(P,Q) != 0");
    return res;
}

PnPatch patch_from_polynomial_surface(const PnSolutionSurface& s, const PythagoreanField& nf) {
    PnPatch patch;
    patch.normal_num = nf.field;
    patch.nh_den = nf.sigma;
    patch.support_num = dot(nf.field, s.x);
    patch.point_num = s.x;
    patch.point_den = BivariatePoly(Rational(1));
    patch.has_source = false;
    patch.offset = 0;
    return patch;
}

} // namespace pnsurf
