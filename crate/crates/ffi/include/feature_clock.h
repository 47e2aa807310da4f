#ifndef FEATURE_CLOCK_H
#define FEATURE_CLOCK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status code returned by every fallible function.
typedef enum FcStatus {
  FC_STATUS_OK = 0,
  // A required pointer argument was NULL.
  FC_STATUS_NULL_ARGUMENT = 1,
  // Invalid input data or options.
  FC_STATUS_INPUT_ERROR = 2,
  // The computation itself failed.
  FC_STATUS_COMPUTE_ERROR = 3,
  // A string argument was not valid UTF-8.
  FC_STATUS_INVALID_UTF8 = 4,
  // An internal panic was caught at the boundary.
  FC_STATUS_PANIC = 5,
} FcStatus;

// Run options; unset fields take the library defaults.
typedef struct FcConfig FcConfig;

// A validated dataset: features, 2D embedding, optional labels.
typedef struct FcDataset FcDataset;

// Output of one run.
typedef struct FcResult FcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *fc_version(void);

// Message for the last failure on this thread, or NULL if the last call succeeded.
const char *fc_last_error_message(void);

// Loads a dataset from CSV files. `labels_path` may be NULL.
//
// # Safety
// String arguments must be NULL or NUL-terminated; `out` must be writable.
enum FcStatus fc_dataset_load(const char *x_path,
                              const char *y_path,
                              const char *labels_path,
                              struct FcDataset **out);

// Builds a dataset from row-major arrays: `x` is `n * d`, `y` is `n * 2`,
// `feature_names` holds `d` strings.
//
// # Safety
// All pointers must be valid for the stated lengths; `out` must be writable.
enum FcStatus fc_dataset_from_arrays(size_t n,
                                     size_t d,
                                     const double *x,
                                     const double *y,
                                     const char *const *feature_names,
                                     struct FcDataset **out);

// Attaches `n` group labels, replacing any existing ones.
//
// # Safety
// `dataset` must come from this library; `labels` must hold `n` strings.
enum FcStatus fc_dataset_set_labels(struct FcDataset *dataset, const char *const *labels, size_t n);

// Number of observations, or 0 for NULL.
//
// # Safety
// `dataset` must be NULL or come from this library.
size_t fc_dataset_rows(const struct FcDataset *dataset);

// Number of features, or 0 for NULL.
//
// # Safety
// `dataset` must be NULL or come from this library.
size_t fc_dataset_features(const struct FcDataset *dataset);

// # Safety
// `dataset` must be NULL or come from this library, and not be used afterwards.
void fc_dataset_free(struct FcDataset *dataset);

// New configuration with every option at its default.
struct FcConfig *fc_config_new(void);

// # Safety
// `config` must be NULL or come from [`fc_config_new`], and not be used afterwards.
void fc_config_free(struct FcConfig *config);

// Significance level; validated when a run starts.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_alpha(struct FcConfig *config, double value);

// Keep only the `k` largest arrows per clock; 0 keeps all.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_top_k(struct FcConfig *config, size_t value);

// Angular step of the projection sweep in degrees.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_theta_step(struct FcConfig *config, double value);

// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_standardize_x(struct FcConfig *config, bool value);

// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_center_y(struct FcConfig *config, bool value);

// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_standardize_betas(struct FcConfig *config, bool value);

// Require both axis p-values below alpha instead of either.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_require_both_axes(struct FcConfig *config, bool value);

// Draw coefficient circles for significant features.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_circles(struct FcConfig *config, bool value);

// Clock radius multiplier.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_scale(struct FcConfig *config, double value);

// Seed for k-means initialization.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_seed(struct FcConfig *config, uint64_t value);

// Cluster in the embedding rather than the feature space.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_cluster_in_embedding(struct FcConfig *config, bool value);

// Canvas size in pixels.
//
// # Safety
// `config` must be NULL or come from [`fc_config_new`].
enum FcStatus fc_config_set_canvas(struct FcConfig *config, uint32_t width, uint32_t height);

// Built-in clustering such as `"kmeans:3"` or `"dbscan:0.5,5"`; NULL clears it.
//
// # Safety
// `config` must come from [`fc_config_new`]; `spec` must be NULL or NUL-terminated.
enum FcStatus fc_config_set_cluster(struct FcConfig *config, const char *spec);

// Global clock over every point. `config` may be NULL for defaults.
//
// # Safety
// Handles must come from this library; `out` must be writable.
enum FcStatus fc_run_global(const struct FcDataset *dataset,
                            const struct FcConfig *config,
                            struct FcResult **out);

// One clock per group (labels or configured clustering).
//
// # Safety
// Handles must come from this library; `out` must be writable.
enum FcStatus fc_run_local(const struct FcDataset *dataset,
                           const struct FcConfig *config,
                           struct FcResult **out);

// One clock per spanning-tree edge between group centers.
//
// # Safety
// Handles must come from this library; `out` must be writable.
enum FcStatus fc_run_intergroup(const struct FcDataset *dataset,
                                const struct FcConfig *config,
                                struct FcResult **out);

// JSON report, owned by `result`.
//
// # Safety
// `result` must be NULL or come from a `fc_run_*` call.
const char *fc_result_json(const struct FcResult *result);

// SVG document, owned by `result`.
//
// # Safety
// `result` must be NULL or come from a `fc_run_*` call.
const char *fc_result_svg(const struct FcResult *result);

// # Safety
// `result` must be NULL or come from a `fc_run_*` call.
size_t fc_result_warning_count(const struct FcResult *result);

// The `i`-th warning, or NULL when out of range.
//
// # Safety
// `result` must be NULL or come from a `fc_run_*` call.
const char *fc_result_warning(const struct FcResult *result, size_t i);

// # Safety
// `result` must be NULL or come from a `fc_run_*` call, and not be used afterwards.
void fc_result_free(struct FcResult *result);

// Length and direction (degrees in [0, 360)) of the arrow `(beta0, beta90)`.
//
// # Safety
// `magnitude` and `angle_deg` must be writable.
enum FcStatus fc_max_contribution(double beta0,
                                  double beta90,
                                  double *magnitude,
                                  double *angle_deg);

// Two-sided Student-t p-value; NaN when `dof` is 0.
double fc_student_t_two_sided_p(double t, size_t dof);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FEATURE_CLOCK_H */
