#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dualspace.hpp"

namespace pnsurf {

// Rectangular Hermite data: points with (not necessarily unit) normals and
// optional per-point tangent-scale pairs. Row index runs along u, column
// index along v.
struct HermiteGrid {
    int rows = 0, cols = 0;
    std::vector<Vec3Q> points;
    std::vector<Vec3Q> normals;
    std::vector<std::array<Rational, 2>> tangent_scales; // (u-scale, v-scale)

    int idx(int i, int j) const { return i * cols + j; }
    const Vec3Q& point(int i, int j) const { return points[idx(i, j)]; }
    const Vec3Q& normal(int i, int j) const { return normals[idx(i, j)]; }
    const std::array<Rational, 2>& scale(int i, int j) const { return tangent_scales[idx(i, j)]; }

    void init_default_scales() {
        tangent_scales.assign(static_cast<size_t>(rows) * cols, {Rational(1), Rational(1)});
    }
};

// Angular tolerance (radians) around the excluded direction (0,0,1).
inline constexpr double kDefaultPoleEps = 1e-6;

// Throws ErrorCode::pole_proximity listing every offending index.
void check_pole_proximity(const HermiteGrid& g, double eps_pole = kDefaultPoleEps);

// Transferred interpolation data in the isotropic model.
struct IsoNet {
    int rows = 0, cols = 0;
    std::vector<IsoPoint> points;
    std::vector<IsoPlane> planes;
    std::vector<Vec3Q> tan_u, tan_v; // lie exactly in their planes

    int idx(int i, int j) const { return i * cols + j; }
    const IsoPoint& point(int i, int j) const { return points[idx(i, j)]; }
    const IsoPlane& plane(int i, int j) const { return planes[idx(i, j)]; }
};

// Hermite cubic c(t) = c0 + c1 t + c2 t^2 + c3 t^3 on [0,1] reproducing
// the stored endpoint/tangent data exactly.
struct CubicCurve {
    Vec3Q p0, p1, t0, t1;
    std::array<Vec3Q, 4> coeff;

    Vec3Q eval(const Rational& t) const;
    Vec3Q deriv(const Rational& t) const;
};

CubicCurve hermite_cubic(const Vec3Q& p0, const Vec3Q& t0, const Vec3Q& p1, const Vec3Q& t1);

// Orthogonal projection of w into the plane (anchor irrelevant).
Vec3Q project_to_plane(const Vec3Q& w, const IsoPlane& plane);

// Bidegree (3,3) patch blending four boundary cubics. Adjacent network
// patches share curve objects, so shared boundaries are bitwise identical.
struct CoonsPatch {
    PolyVec3 surface;
    std::shared_ptr<const CubicCurve> c0, c1; // u-curves at v=0, v=1
    std::shared_ptr<const CubicCurve> d0, d1; // v-curves at u=0, u=1
    std::array<IsoPoint, 4> corners;          // a00, a10, a01, a11
};

CoonsPatch coons_patch(std::shared_ptr<const CubicCurve> c0,
                       std::shared_ptr<const CubicCurve> c1,
                       std::shared_ptr<const CubicCurve> d0,
                       std::shared_ptr<const CubicCurve> d1);

IsoNet build_iso_net(const HermiteGrid& g);

// Boundary tangents: central differences at inner points, doubled one-sided
// differences along the boundary, all projected into the contact planes and
// multiplied by the per-point scales.
void assign_boundary_tangents(IsoNet& net, const HermiteGrid& g);

struct CoonsNetwork {
    int cell_rows = 0, cell_cols = 0;
    std::vector<CoonsPatch> patches;                          // row-major cells
    std::vector<std::shared_ptr<const CubicCurve>> u_curves;  // (rows-1) x cols
    std::vector<std::shared_ptr<const CubicCurve>> v_curves;  // rows x (cols-1)
    IsoNet net;

    const CoonsPatch& patch(int r, int c) const { return patches[r * cell_cols + c]; }
};

CoonsNetwork build_network(const HermiteGrid& g);

} // namespace pnsurf
