#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "patchwork.hpp"

namespace pnsurf {

// ---------------------------------------------------------------------------
// Exact sampling of a PN patch

struct ExactSample {
    Rational u, v;
    bool pole = false;             // point-field denominator vanishes here
    bool gauss_degenerate = false; // (n_u x n_v) . n vanishes here
    Vec3Q x, n, xu, xv, nu, nv;
    Rational h;
    Rational det_ratio; // det of the radius-of-curvature matrix (when defined)
};

// Evaluates the patch fields exactly on the tensor grid us x vs.
std::vector<ExactSample> exact_samples(const PnPatch& p, const std::vector<Rational>& us,
                                       const std::vector<Rational>& vs);

ExactSample exact_sample(const PnPatch& p, const Rational& u, const Rational& v);

// ---------------------------------------------------------------------------
// PN verification

struct PnCertificate {
    std::string patch_id;
    int grid_u = 0, grid_v = 0; // certifying grid dimensions (degree bound + 1)
    bool exact_pn = false;
    std::optional<std::pair<Rational, Rational>> witness; // failing node, if any
};

// Checks ||x_u x x_v||^2 = ((x_u x x_v) . n)^2 as an exact identity by
// evaluation on a rational grid exceeding the bidegree bound computed from
// the stored numerator/denominator bidegrees. Zero residual required.
PnCertificate verify_pn(const PnPatch& p, const std::string& patch_id, int threads = 0);

// ---------------------------------------------------------------------------
// Continuity

enum class EdgeSide { u0, u1, v0, v1 };

struct G1Report {
    int samples = 0;
    bool positions_exact = false;
    bool normals_exact = false;
    double max_position_deviation = 0;
    double max_normal_angle = 0;
    bool pass = false;
};

// Samples both patches along the given edge sides with the shared edge
// parameter; positions are compared exactly, normal deviation must stay
// below tol in angle.
G1Report check_g1(const PnPatch& pa, EdgeSide ea, const PnPatch& pb, EdgeSide eb, int samples,
                  double tol);

// Cell-indexed wrapper; throws ErrorCode::non_adjacent when the two cells do
// not share an edge.
G1Report check_g1_cells(const PnPatch& pa, std::pair<int, int> cell_a, const PnPatch& pb,
                        std::pair<int, int> cell_b, int samples, double tol);

// ---------------------------------------------------------------------------
// Curvature / ridge diagnostics

struct CurvatureSample {
    double u = 0, v = 0;
    bool degenerate = false; // Gauss-map area form vanishes (exact zero)
    int det_sign = 0;        // exact sign of det(radius matrix)
    double det_ratio = 0;    // det(Hess h + h I) via the exact ratio formula
    double gauss_k = 0;      // 1 / det_ratio
    double eig1 = 0, eig2 = 0;
};

struct CurvatureField {
    int res_u = 0, res_v = 0; // sample counts per direction
    std::vector<CurvatureSample> samples;

    const CurvatureSample& at(int a, int b) const { return samples[a * res_v + b]; }
};

// Samples det(Hess_{S^2} h + h I) on a res x res grid over [0,1]^2 using
// det = ((x_u x x_v).n) / ((n_u x n_v).n), evaluated exactly; eigenvalues
// of the radius matrix are computed in floating point in a tangent basis.
CurvatureField sample_curvature(const PnPatch& p, int res);

struct RidgeFlag {
    int a = 0, b = 0;
    std::string reason; // "near-zero" or "eigen-sign-change" or "degenerate"
};

struct RidgeReport {
    std::vector<RidgeFlag> flags;
    double eps_used = 0;
    bool ridge_free() const { return flags.empty(); }
};

// Flags |det| < eps_rel * median|det| and eigenvalue sign changes between
// 4-neighbour samples.
RidgeReport detect_ridges(const CurvatureField& field, double eps_rel = 1e-6);

// ---------------------------------------------------------------------------
// Objective and tangent-scale optimization

// Evaluates the patch pipeline in doubles straight from the isotropic
// patch (no symbolic pullback); used by quadrature and meshing.
struct IsoSampleD {
    Vec3d x, n, xu, xv, nu, nv;
    double h = 0;
    double det_f = 0; // (x_u x x_v) . n
    double det_g = 0; // (n_u x n_v) . n
    bool ok = false;
};

IsoSampleD sample_iso_double(const PolyVec3& y, double u, double v, double offset = 0);

struct ObjectiveValue {
    double value = 0;   // quadrature of K^2 dA over all patches
    int bad_samples = 0; // non-finite contributions (reported, not dropped)
};

// Midpoint-rule quadrature of K^2 with the unit-sphere area element
// ||n_u x n_v|| du dv, summed over the network's parameter squares.
ObjectiveValue network_objective(const CoonsNetwork& nw, int res);

struct OptimizeResult {
    std::vector<std::array<Rational, 2>> scales;
    double objective_before = 0;
    double objective_after = 0;
    int evaluations = 0;
    bool budget_exhausted = false;
};

// Derivative-free minimization of the ridge objective over per-point
// tangent-scale pairs: deterministic seeds followed by coordinate descent
// with golden-section line searches, monotone acceptance, hard budget on
// objective evaluations.
OptimizeResult optimize_tangent_scales(const HermiteGrid& g, double lo, double hi, int budget,
                                       int quad_res = 16);

// ---------------------------------------------------------------------------
// Tessellation

struct Mesh {
    std::vector<Vec3d> vertices;
    std::vector<Vec3d> normals;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::pair<int, int>> skipped; // pole samples (grid indices)
};

// res x res cells, two triangles per cell; vertex normals come from the
// rational unit normal field. Pole samples are skipped and reported.
Mesh tessellate(const PnPatch& p, int res);

} // namespace pnsurf
