#ifndef RBOOST_H
#define RBOOST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NULL_POINTER = 1,
  RB_STATUS_INVALID_INPUT = 2,
  RB_STATUS_DIMENSION_MISMATCH = 3,
  RB_STATUS_DEGENERATE_LEARNER = 4,
  RB_STATUS_MODEL_FORMAT = 5,
  RB_STATUS_PANIC = 6,
  RB_STATUS_INTERNAL = 7,
} RbStatus;

/**
 * Algorithm selector for [`RbTrainConfig`].
 */
typedef enum RbAlgorithm {
  RB_ALGORITHM_BOOSTING = 0,
  RB_ALGORITHM_R_BOOSTING = 1,
  RB_ALGORITHM_DDR_BOOSTING = 2,
} RbAlgorithm;

/**
 * Opaque training set.
 */
typedef struct RbDataset RbDataset;

/**
 * Opaque fitted model.
 */
typedef struct RbModel RbModel;

/**
 * Training parameters. `u` is ignored unless the algorithm is RBoosting.
 * A `clip_bound` of zero or below disables clipping.
 */
typedef struct RbTrainConfig {
  enum RbAlgorithm algorithm;
  size_t max_iterations;
  uint64_t u;
  size_t tree_splits;
  double clip_bound;
} RbTrainConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rb_version(void);

/**
 * Copies `rows * dim` row-major features and `rows` targets into a new
 * dataset handle.
 *
 * # Safety
 * `features` and `targets` must point to at least `rows * dim` and `rows`
 * readable doubles; `out` must be writable.
 */
enum RbStatus rb_dataset_new(const double *features,
                             size_t rows,
                             size_t dim,
                             const double *targets,
                             struct RbDataset **out);

/**
 * Number of rows, or zero for a null handle.
 *
 * # Safety
 * `data` must be null or a live handle from [`rb_dataset_new`].
 */
size_t rb_dataset_len(const struct RbDataset *data);

/**
 * # Safety
 * `data` must be null or a handle from [`rb_dataset_new`] not yet freed.
 */
void rb_dataset_free(struct RbDataset *data);

/**
 * Fills `config` with defaults: Boosting, 100 iterations, u = 1, stumps,
 * no clipping.
 *
 * # Safety
 * `config` must be null or writable.
 */
void rb_train_config_default(struct RbTrainConfig *config);

/**
 * Trains a tree ensemble on `data`.
 *
 * # Safety
 * `data` must be a live dataset handle, `config` readable and `out`
 * writable.
 */
enum RbStatus rb_train(const struct RbDataset *data,
                       const struct RbTrainConfig *config,
                       struct RbModel **out);

/**
 * Predicts `rows` row-major inputs of width `dim` into `out`. Clipping is
 * applied when the model carries a bound.
 *
 * # Safety
 * `features` must hold `rows * dim` doubles and `out` room for `rows`.
 */
enum RbStatus rb_model_predict(const struct RbModel *model,
                               const double *features,
                               size_t rows,
                               size_t dim,
                               double *out);

/**
 * Number of boosting stages, or zero for a null handle.
 *
 * # Safety
 * `model` must be null or a live model handle.
 */
size_t rb_model_num_stages(const struct RbModel *model);

/**
 * Sum of absolute effective learner coefficients, or NaN for a null handle.
 *
 * # Safety
 * `model` must be null or a live model handle.
 */
double rb_model_l1_norm(const struct RbModel *model);

/**
 * Serializes the model to JSON. Release the string with [`rb_free_string`].
 *
 * # Safety
 * `model` must be a live model handle and `out` writable.
 */
enum RbStatus rb_model_to_json(const struct RbModel *model, char **out);

/**
 * Parses a model previously written by [`rb_model_to_json`] or the CLI.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum RbStatus rb_model_from_json(const char *json, struct RbModel **out);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void rb_model_free(struct RbModel *model);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void rb_free_string(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RBOOST_H */
