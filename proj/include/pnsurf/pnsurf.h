/*
 * pnsurf — Hermite interpolation with rational-offset (PN) surface patches.
 *
 * C API over the C++ core: opaque handles, integer status codes, strings
 * owned by the library and released with pnsurf_string_free(). All numeric
 * file formats use exact "p/q" strings; decimal input is rationalized by
 * place value.
 */

#ifndef PNSURF_H
#define PNSURF_H

#ifdef __cplusplus
extern "C" {
#endif

#define PNSURF_API __attribute__((visibility("default")))

typedef enum pnsurf_status {
    PNSURF_OK = 0,
    PNSURF_ERROR_VERIFY = 1,     /* a verification check failed */
    PNSURF_ERROR_INPUT = 2,      /* parse / shape / IO problems */
    PNSURF_ERROR_DEGENERACY = 3, /* geometric degeneracy */
    PNSURF_ERROR_INTERNAL = 4
} pnsurf_status;

typedef struct pnsurf_grid pnsurf_grid;     /* Hermite grid (points + normals) */
typedef struct pnsurf_bundle pnsurf_bundle; /* interpolation result */

PNSURF_API const char* pnsurf_version(void);

/* Message for the most recent failing call on this thread. */
PNSURF_API const char* pnsurf_last_error(void);

PNSURF_API void pnsurf_string_free(char* s);

/* ---- grids ---------------------------------------------------------- */

PNSURF_API pnsurf_status pnsurf_grid_load(const char* path, double pole_eps,
                                          int check_poles, pnsurf_grid** out);
PNSURF_API pnsurf_status pnsurf_grid_from_json(const char* json_text, double pole_eps,
                                               int check_poles, pnsurf_grid** out);
PNSURF_API void pnsurf_grid_free(pnsurf_grid* g);
PNSURF_API int pnsurf_grid_rows(const pnsurf_grid* g);
PNSURF_API int pnsurf_grid_cols(const pnsurf_grid* g);

/* Rotates the data away from the pole direction; optionally returns the
 * exact rotation as a JSON 3x3 matrix of "p/q" strings. */
PNSURF_API pnsurf_status pnsurf_grid_auto_rotate(pnsurf_grid* g, double pole_eps,
                                                 char** rotation_json);

/* Replaces the per-point tangent scales from a scales file. */
PNSURF_API pnsurf_status pnsurf_grid_apply_scales(pnsurf_grid* g, const char* path);

PNSURF_API pnsurf_status pnsurf_grid_check_poles(const pnsurf_grid* g, double pole_eps);

/* ---- interpolation / bundles ---------------------------------------- */

PNSURF_API pnsurf_status pnsurf_interpolate(const pnsurf_grid* g, pnsurf_bundle** out);

PNSURF_API pnsurf_status pnsurf_bundle_load(const char* path, pnsurf_bundle** out);
PNSURF_API pnsurf_status pnsurf_bundle_save(const pnsurf_bundle* b, const char* path);
PNSURF_API void pnsurf_bundle_free(pnsurf_bundle* b);
PNSURF_API int pnsurf_bundle_patch_count(const pnsurf_bundle* b);

/* distance is an exact decimal or "p/q" string; side is +1 or -1. */
PNSURF_API pnsurf_status pnsurf_bundle_offset(const pnsurf_bundle* b, const char* distance,
                                              int side, pnsurf_bundle** out);

/* Writes one OBJ mesh per patch into the directory (patch_<r>_<c>.obj),
 * sampling a (samples+1)^2 grid per patch. */
PNSURF_API pnsurf_status pnsurf_bundle_export_obj(const pnsurf_bundle* b, int samples,
                                                  const char* directory);

/* ---- verification / analysis ---------------------------------------- */

/* PN certificates for every patch plus G1 reports along interior edges.
 * *all_ok is 1 when every certificate is exact-PN and every edge passes.
 * Returns PNSURF_OK even when checks fail; the report carries the detail. */
PNSURF_API pnsurf_status pnsurf_verify(const pnsurf_bundle* b, int g1_samples, double g1_tol,
                                       char** report_json, int* all_ok);

/* Curvature sampling + ridge detection. *ridge_found is 1 when any sample
 * is flagged. */
PNSURF_API pnsurf_status pnsurf_analyze(const pnsurf_bundle* b, int resolution,
                                        double ridge_eps_rel, int include_samples,
                                        char** report_json, int* ridge_found);

/* ---- tangent-scale optimization -------------------------------------- */

PNSURF_API pnsurf_status pnsurf_optimize_scales(const pnsurf_grid* g, int budget, double lo,
                                                double hi, int quad_res, char** scales_json,
                                                double* objective_before,
                                                double* objective_after,
                                                int* budget_exhausted);

/* ---- polynomial PN solver -------------------------------------------- */

/* field file: {"components": [poly, poly, poly]} with poly = [[i,j,"c"],...].
 * Reports system dimensions, nullspace dimension, integrated surfaces and
 * their PN certificates. */
PNSURF_API pnsurf_status pnsurf_pn_solve_file(const char* field_path, int ell,
                                              char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PNSURF_H */
