#pragma once

#include "analysis.hpp"
#include "grid_io.hpp"

namespace pnsurf {

inline constexpr const char* kLibraryVersion = "pnsurf 0.1.0";

struct BundlePatch {
    int row = 0, col = 0;
    PnPatch patch;
};

// Serialized artifact of one interpolation run: the source grid, one primal
// PN patch per cell and enough provenance to reproduce the run.
struct Bundle {
    HermiteGrid grid;
    std::string source_hash;
    std::string version = kLibraryVersion;
    Rational offset; // total offset applied to every patch (0 for a fresh run)
    std::vector<BundlePatch> patches;

    const BundlePatch& at(int r, int c) const;
};

// Full construction pipeline: isotropic transfer, Coons network, envelope
// pullback per cell (cells fan out to workers, results join in cell order).
Bundle interpolate_grid(const HermiteGrid& g, int threads = 0);

Bundle offset_bundle(const Bundle& b, const Rational& d);

Json bundle_to_json(const Bundle& b);
Bundle bundle_from_json(const Json& j);
void save_bundle(const Bundle& b, const std::string& path);
Bundle load_bundle(const std::string& path);

// ---------------------------------------------------------------------------
// verification / analysis reports

struct VerifyOutcome {
    std::vector<PnCertificate> certificates;
    struct Edge {
        std::pair<int, int> cell_a, cell_b;
        G1Report report;
    };
    std::vector<Edge> edges;
    bool all_exact_pn = true;
    bool all_g1 = true;
    bool pass() const { return all_exact_pn && all_g1; }
};

VerifyOutcome verify_bundle(const Bundle& b, int g1_samples = 101, double g1_tol = 1e-12,
                            int threads = 0);
Json verify_to_json(const VerifyOutcome& v);

struct AnalyzeOutcome {
    int resolution = 0;
    double eps_rel = 0;
    struct PatchAnalysis {
        int row = 0, col = 0;
        CurvatureField field;
        RidgeReport ridges;
    };
    std::vector<PatchAnalysis> patches;
    bool any_ridge = false;
};

AnalyzeOutcome analyze_bundle(const Bundle& b, int resolution = 33, double eps_rel = 1e-6);
Json analyze_to_json(const AnalyzeOutcome& a, bool include_samples = true);

// ---------------------------------------------------------------------------
// meshes

std::string obj_from_mesh(const Mesh& m);
void export_obj(const Mesh& m, const std::string& path);

} // namespace pnsurf
