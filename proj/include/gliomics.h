/* Copyright 2026 the gliomics authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the gliomics shared library: tumor structure-map radiomics,
 * minimum-volume-ellipsoid invasiveness, prognostic regression models,
 * ensemble label fusion and segmentation metrics.
 *
 * Conventions:
 *   - Every function returns a gm_status; GM_OK (0) means success.
 *   - On failure, gm_last_error() returns a thread-local message.
 *   - Objects returned through out-parameters are owned by the caller and
 *     released with the matching gm_*_free function.
 *   - char** out-parameters receive heap strings released by gm_string_free.
 *   - Structured parameters and results travel as JSON documents.
 */

#ifndef GLIOMICS_H
#define GLIOMICS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gm_status {
  GM_OK = 0,
  GM_ERR_VALIDATION = 1,
  GM_ERR_IO = 2,
  GM_ERR_FORMAT = 3,
  GM_ERR_UNSUPPORTED = 4,
  GM_ERR_CONFIG = 5,
  GM_ERR_DEGENERATE = 6,
  GM_ERR_EMPTY_ROI = 7,
  GM_ERR_ITERATION_LIMIT = 8,
  GM_ERR_SHAPE = 9,
  GM_ERR_INTERNAL = 10
} gm_status;

typedef struct gm_volume gm_volume;     /* label or intensity volume */
typedef struct gm_table gm_table;       /* per-subject feature table */
typedef struct gm_model gm_model;       /* trained prognostic model */
typedef struct gm_features gm_features; /* named per-subject feature vector */

const char* gm_version(void);

/* Thread-local message describing the most recent failure. */
const char* gm_last_error(void);

void gm_string_free(char* s);
void gm_buffer_free(double* p);

/* ---- volumes ------------------------------------------------------- */

/* NIfTI-1 (.nii / .nii.gz). Integer files with values in {0,1,2,4} load as
 * label volumes, everything else as intensity volumes. */
gm_status gm_volume_read(const char* path, gm_volume** out);
/* Requires a label map; fails listing offending values otherwise. */
gm_status gm_volume_read_labels(const char* path, gm_volume** out);
gm_status gm_volume_write(const gm_volume* vol, const char* path);
void gm_volume_free(gm_volume* vol);

int gm_volume_is_labels(const gm_volume* vol);
void gm_volume_dims(const gm_volume* vol, int* nx, int* ny, int* nz);
void gm_volume_spacing(const gm_volume* vol, double* sx, double* sy,
                       double* sz);

/* Masked z-score normalization. mask_kind: "volume" (all voxels) or
 * "nonzero" (voxels with nonzero intensity). */
gm_status gm_zscore(const gm_volume* vol, const char* mask_kind,
                    gm_volume** out);

/* ---- feature extraction -------------------------------------------- */

/* The 162 radiomics features (81 per ROI for WT and TC) plus RIC. */
gm_status gm_extract_features(const gm_volume* vol, gm_features** out);
size_t gm_features_count(const gm_features* f);
const char* gm_features_name(const gm_features* f, size_t i);
double gm_features_value(const gm_features* f, size_t i);
void gm_features_free(gm_features* f);

/* Relative invasiveness coefficient. ellipsoids_json (optional) receives
 * the fitted WT/TC minimum-volume ellipsoids as JSON. */
gm_status gm_ric(const gm_volume* vol, double* ric,
                 char** ellipsoids_json);

/* ---- segmentation-side operations ----------------------------------- */

/* Weighted per-voxel majority vote; weights may be NULL for equal votes.
 * Ties break by label priority 4 > 1 > 2 > 0. */
gm_status gm_fuse(const gm_volume* const* members, const double* weights,
                  size_t n_members, gm_volume** out);

/* params_json keys: min_wt_voxels, min_et_voxels, et_floor_voxels,
 * intensity_filter, z_et, connectivity. t1gd may be NULL when the
 * intensity filter is off; it must already be z-scored. */
gm_status gm_postprocess(const gm_volume* seg, const gm_volume* t1gd,
                         const char* params_json, gm_volume** out);

/* Dice and Hausdorff (hd_percentile 100 or 95) per region as JSON. */
gm_status gm_seg_metrics(const gm_volume* pred, const gm_volume* ref,
                         int hd_percentile, char** report_json);

/* ---- feature tables -------------------------------------------------- */

gm_status gm_table_read(const char* path, gm_table** out);
gm_status gm_table_write(const gm_table* table, const char* path);
void gm_table_free(gm_table* table);

size_t gm_table_rows(const gm_table* table);
const char* gm_table_subject(const gm_table* table, size_t row);
/* Fills a caller buffer of gm_table_rows() doubles. */
gm_status gm_table_survival(const gm_table* table, double* out);
gm_status gm_table_filter_gtr(const gm_table* table, gm_table** out);

/* Extracts every <root>/<subject>/seg.nii[.gz] with metadata from
 * <root>/cohort.csv; failures_json lists excluded subjects. */
gm_status gm_extract_cohort(const char* root_dir, const char* params_json,
                            int threads, gm_table** out,
                            char** failures_json);

/* ---- selection, models, evaluation ----------------------------------- */

/* Correlation pruning followed by random-forest RFE. params_json keys:
 * correlation_threshold, exclude, rfe{forest{...}, sizes, folds,
 * tie_tolerance}, seed, threads. */
gm_status gm_select_features(const gm_table* table, const char* params_json,
                             char** report_json);

/* spec_json: {"preset":"baseline|radiomics|invasiveness"} or a full spec
 * {"kind":..., "predictors":[...], "forest":{...}, "svr":{...}}. */
gm_status gm_train(const gm_table* table, const char* spec_json,
                   unsigned long long seed, int threads, gm_model** out);
gm_status gm_model_save(const gm_model* model, const char* path);
gm_status gm_model_load(const char* path, gm_model** out);
void gm_model_free(gm_model* model);

/* Caller frees *pred with gm_buffer_free; *n receives the row count. */
gm_status gm_predict(const gm_model* model, const gm_table* table,
                     double** pred, size_t* n);

/* Accuracy / MSE / mSE / Spearman of predictions against targets.
 * params_json may set {"t_low":300,"t_high":450}; NULL for defaults. */
gm_status gm_evaluate(const double* pred, const double* truth, size_t n,
                      const char* params_json, char** report_json);

/* Deterministic k-fold cross-validation of a model spec. */
gm_status gm_cross_validate(const gm_table* table, const char* spec_json,
                            int k, unsigned long long seed, int threads,
                            char** report_json);

/* The full study: extract, select, train the three prognostic models,
 * cross-validate, optionally score a holdout directory; persists artifacts
 * under output_dir and returns the report document. */
gm_status gm_run_study(const char* config_json, char** report_json);

/* ---- synthetic data --------------------------------------------------- */

/* params_json keys: wt_semiaxes [a1,a2,a3], ric, dims [nx,ny,nz],
 * spacing [sx,sy,sz], rotation_zyx [alpha,beta,gamma] (radians). */
gm_status gm_make_phantom(const char* params_json, gm_volume** out);

/* Writes a seeded cohort (volumes + cohort.csv) under out_dir. */
gm_status gm_make_cohort(const char* spec_json, const char* out_dir,
                         char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* GLIOMICS_H */
