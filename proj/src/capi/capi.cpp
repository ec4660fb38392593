#include "pnsurf/pnsurf.h"

#include <cstring>
#include <cstdlib>
#include <memory>
#include <filesystem>
#include <string>

#include "errors.hpp"
#include "pipeline.hpp"
#include "polypn.hpp"

using namespace pnsurf;

struct pnsurf_grid {
    HermiteGrid grid;
};

struct pnsurf_bundle {
    Bundle bundle;
};

namespace {

thread_local std::string g_last_error;

pnsurf_status status_of(const Error& e) {
    switch (e.category()) {
    case ErrorCategory::input: return PNSURF_ERROR_INPUT;
    case ErrorCategory::degeneracy: return PNSURF_ERROR_DEGENERACY;
    case ErrorCategory::verification: return PNSURF_ERROR_VERIFY;
    case ErrorCategory::internal: return PNSURF_ERROR_INTERNAL;
    }
    return PNSURF_ERROR_INTERNAL;
}

template <typename Fn>
pnsurf_status guarded(Fn&& fn) {
    try {
        fn();
        return PNSURF_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PNSURF_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return PNSURF_ERROR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* pnsurf_version(void) { return kLibraryVersion; }

const char* pnsurf_last_error(void) { return g_last_error.c_str(); }

void pnsurf_string_free(char* s) { std::free(s); }

/* ---- grids ---------------------------------------------------------- */

pnsurf_status pnsurf_grid_load(const char* path, double pole_eps, int check_poles,
                               pnsurf_grid** out) {
    return guarded([&] {
        auto g = std::make_unique<pnsurf_grid>();
        g->grid = load_grid(path, pole_eps, check_poles != 0);
        *out = g.release();
    });
}

pnsurf_status pnsurf_grid_from_json(const char* json_text, double pole_eps, int check_poles,
                                    pnsurf_grid** out) {
    return guarded([&] {
        auto g = std::make_unique<pnsurf_grid>();
        g->grid = grid_from_json(parse_json_exact(json_text), pole_eps, check_poles != 0);
        *out = g.release();
    });
}

void pnsurf_grid_free(pnsurf_grid* g) { delete g; }

int pnsurf_grid_rows(const pnsurf_grid* g) { return g ? g->grid.rows : 0; }

int pnsurf_grid_cols(const pnsurf_grid* g) { return g ? g->grid.cols : 0; }

pnsurf_status pnsurf_grid_auto_rotate(pnsurf_grid* g, double pole_eps, char** rotation_json) {
    return guarded([&] {
        AutoRotateResult res = auto_rotate(g->grid, pole_eps);
        g->grid = std::move(res.grid);
        if (rotation_json) {
            Json rj = Json::array();
            for (int i = 0; i < 3; ++i) rj.push_back(vec3q_to_json(res.rotation[i]));
            *rotation_json = dup_string(rj.dump());
        }
    });
}

pnsurf_status pnsurf_grid_apply_scales(pnsurf_grid* g, const char* path) {
    return guarded(
        [&] { g->grid.tangent_scales = load_scales(path, g->grid.rows, g->grid.cols); });
}

pnsurf_status pnsurf_grid_check_poles(const pnsurf_grid* g, double pole_eps) {
    return guarded([&] { check_pole_proximity(g->grid, pole_eps); });
}

/* ---- interpolation / bundles ---------------------------------------- */

pnsurf_status pnsurf_interpolate(const pnsurf_grid* g, pnsurf_bundle** out) {
    return guarded([&] {
        auto b = std::make_unique<pnsurf_bundle>();
        b->bundle = interpolate_grid(g->grid);
        *out = b.release();
    });
}

pnsurf_status pnsurf_bundle_load(const char* path, pnsurf_bundle** out) {
    return guarded([&] {
        auto b = std::make_unique<pnsurf_bundle>();
        b->bundle = load_bundle(path);
        *out = b.release();
    });
}

pnsurf_status pnsurf_bundle_save(const pnsurf_bundle* b, const char* path) {
    return guarded([&] { save_bundle(b->bundle, path); });
}

void pnsurf_bundle_free(pnsurf_bundle* b) { delete b; }

int pnsurf_bundle_patch_count(const pnsurf_bundle* b) {
    return b ? static_cast<int>(b->bundle.patches.size()) : 0;
}

pnsurf_status pnsurf_bundle_offset(const pnsurf_bundle* b, const char* distance, int side,
                                   pnsurf_bundle** out) {
    return guarded([&] {
        if (side != 1 && side != -1)
            throw Error(ErrorCode::parse, "offset side must be +1 or -1");
        Rational d = parse_rational(distance);
        if (side < 0) d = -d;
        auto nb = std::make_unique<pnsurf_bundle>();
        nb->bundle = offset_bundle(b->bundle, d);
        *out = nb.release();
    });
}

pnsurf_status pnsurf_bundle_export_obj(const pnsurf_bundle* b, int samples,
                                       const char* directory) {
    return guarded([&] {
        if (samples < 1) throw Error(ErrorCode::parse, "samples must be >= 1");
        std::filesystem::create_directories(directory);
        for (const auto& p : b->bundle.patches) {
            Mesh m = tessellate(p.patch, samples);
            std::string path = std::string(directory) + "/patch_" + std::to_string(p.row) +
                               "_" + std::to_string(p.col) + ".obj";
            export_obj(m, path);
        }
    });
}

/* ---- verification / analysis ---------------------------------------- */

pnsurf_status pnsurf_verify(const pnsurf_bundle* b, int g1_samples, double g1_tol,
                            char** report_json, int* all_ok) {
    return guarded([&] {
        VerifyOutcome v = verify_bundle(b->bundle, g1_samples, g1_tol);
        if (report_json) *report_json = dup_string(verify_to_json(v).dump(2));
        if (all_ok) *all_ok = v.pass() ? 1 : 0;
    });
}

pnsurf_status pnsurf_analyze(const pnsurf_bundle* b, int resolution, double ridge_eps_rel,
                             int include_samples, char** report_json, int* ridge_found) {
    return guarded([&] {
        AnalyzeOutcome a = analyze_bundle(b->bundle, resolution, ridge_eps_rel);
        if (report_json)
            *report_json = dup_string(analyze_to_json(a, include_samples != 0).dump(2));
        if (ridge_found) *ridge_found = a.any_ridge ? 1 : 0;
    });
}

/* ---- tangent-scale optimization -------------------------------------- */

pnsurf_status pnsurf_optimize_scales(const pnsurf_grid* g, int budget, double lo, double hi,
                                     int quad_res, char** scales_json,
                                     double* objective_before, double* objective_after,
                                     int* budget_exhausted) {
    return guarded([&] {
        OptimizeResult res = optimize_tangent_scales(g->grid, lo, hi, budget, quad_res);
        if (scales_json) {
            Json j = scales_to_json(res.scales, g->grid.rows, g->grid.cols);
            j["objective_before"] = res.objective_before;
            j["objective_after"] = res.objective_after;
            j["evaluations"] = res.evaluations;
            j["budget_exhausted"] = res.budget_exhausted;
            *scales_json = dup_string(j.dump(2));
        }
        if (objective_before) *objective_before = res.objective_before;
        if (objective_after) *objective_after = res.objective_after;
        if (budget_exhausted) *budget_exhausted = res.budget_exhausted ? 1 : 0;
    });
}

/* ---- polynomial PN solver -------------------------------------------- */

pnsurf_status pnsurf_pn_solve_file(const char* field_path, int ell, char** report_json) {
    return guarded([&] {
        Json fj = parse_json_exact(read_text_file(field_path));
        if (!fj.is_object() || !fj.contains("components"))
            throw Error(ErrorCode::parse, "field file needs 'components'");
        PolyVec3 n = polyvec_from_json(fj.at("components"));
        PythagoreanField nf = check_pythagorean(n);

        Json rep;
        PnSystem sys = build_pn_system(n, ell);
        rep["k"] = sys.k;
        rep["ell"] = sys.ell;
        rep["rows"] = static_cast<int>(sys.rows);
        rep["cols"] = static_cast<int>(sys.cols);
        rep["sigma"] = poly_to_json(nf.sigma);

        try {
            PnSolveResult res = solve_pn_system(n, ell);
            rep["nullspace_dim"] = static_cast<int>(res.nullspace_dim);
            rep["degenerate_pairs"] = static_cast<int>(res.degenerate_pairs);
            Json surfaces = Json::array();
            for (const auto& s : res.surfaces) {
                Json sj;
                sj["x"] = polyvec_to_json(s.x);
                sj["p"] = polyvec_to_json(s.p);
                sj["q"] = polyvec_to_json(s.q);
                sj["f"] = poly_to_json(s.f);
                PnPatch patch = patch_from_polynomial_surface(s, nf);
                PnCertificate cert = verify_pn(patch, "solution");
                sj["exact_pn"] = cert.exact_pn;
                PolyVec3 integ = s.p.diff_v() - s.q.diff_u();
                sj["integrability_zero"] =
                    integ.x.is_zero() && integ.y.is_zero() && integ.z.is_zero();
                surfaces.push_back(std::move(sj));
            }
            rep["surfaces"] = std::move(surfaces);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::empty_solution) throw;
            rep["nullspace_dim"] =
                static_cast<int>(nullspace(sys.matrix).size());
            rep["surfaces"] = Json::array();
            rep["empty_solution"] = true;
            if (report_json) *report_json = dup_string(rep.dump(2));
            throw; // callers still see the degeneracy status
        }
        if (report_json) *report_json = dup_string(rep.dump(2));
    });
}

} // extern "C"
