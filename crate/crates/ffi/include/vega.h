#ifndef VEGA_H
#define VEGA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define VEGA_WARN_NONPOSITIVE_MAJORITY 1

#define VEGA_WARN_ANGLE_ABOVE_ONE (1 << 1)

#define VEGA_WARN_DEGENERATE_SAMPLE (1 << 2)

/**
 * Result of every fallible call.
 */
typedef enum VegaStatus {
  VEGA_STATUS_OK = 0,
  VEGA_STATUS_NULL_POINTER = 1,
  /**
   * Malformed sample: empty, non-finite, negative weights, length
   * mismatch, zero population, or a nonpositive majority in strict mode.
   */
  VEGA_STATUS_INVALID_INPUT = 2,
  /**
   * Mathematically undefined: nonpositive mean, bad plan, out-of-range
   * quantile count or index.
   */
  VEGA_STATUS_DOMAIN = 3,
  /**
   * A group label was not valid UTF-8.
   */
  VEGA_STATUS_INVALID_UTF8 = 4,
  /**
   * Internal error; the library state is unaffected.
   */
  VEGA_STATUS_PANIC = 5,
} VegaStatus;

typedef enum VegaMeasure {
  VEGA_MEASURE_GINI = 0,
  VEGA_MEASURE_VEGA = 1,
  VEGA_MEASURE_ANGULAR_MEAN = 2,
} VegaMeasure;

/**
 * Opaque decomposition handle.
 */
typedef struct VegaDecomposition VegaDecomposition;

/**
 * Opaque sample handle.
 */
typedef struct VegaSample VegaSample;

typedef struct VegaIndexReport {
  double value;
  double population;
  double mean;
  double nonpositive_share;
  /**
   * `VEGA_WARN_*` bits.
   */
  uint32_t warnings;
} VegaIndexReport;

typedef struct VegaDecompositionSummary {
  size_t group_count;
  double between_term;
  double total;
  double residual;
  uint32_t warnings;
} VegaDecompositionSummary;

/**
 * One group of a decomposition. `label` is owned by the decomposition
 * handle and valid until it is freed.
 */
typedef struct VegaGroupTerm {
  const char *label;
  double population;
  double mean;
  /**
   * NaN when `within_defined` is false.
   */
  double within_index;
  bool within_defined;
  double weight;
  double contribution;
} VegaGroupTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *vega_version(void);

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *vega_last_error_message(void);

/**
 * Create a sample from `len` values. `weights` may be null for unit
 * weights; otherwise it must hold `len` entries. The data is copied.
 *
 * # Safety
 * `values` (and `weights` when non-null) must point to `len` readable
 * doubles; `out` must be a valid pointer.
 */
enum VegaStatus vega_sample_new(const double *values,
                                const double *weights,
                                size_t len,
                                struct VegaSample **out);

/**
 * Release a sample. Null is ignored.
 *
 * # Safety
 * `sample` must come from [`vega_sample_new`] and not be used afterwards.
 */
void vega_sample_free(struct VegaSample *sample);

/**
 * Number of observations, or 0 for null.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
size_t vega_sample_len(const struct VegaSample *sample);

/**
 * Validate a sample for `measure`. On success `*warnings` receives the
 * `VEGA_WARN_*` bits; otherwise the first error is returned.
 *
 * # Safety
 * `sample` must be a live handle; `warnings` a valid pointer.
 */
enum VegaStatus vega_validate(const struct VegaSample *sample,
                              enum VegaMeasure measure,
                              bool strict,
                              uint32_t *warnings);

/**
 * Compute `measure`. `quantiles == 0` evaluates exactly; otherwise on that
 * many equal-weight bins. `threads` of 0 is treated as 1.
 *
 * # Safety
 * `sample` must be a live handle; `out` a valid pointer.
 */
enum VegaStatus vega_compute(const struct VegaSample *sample,
                             enum VegaMeasure measure,
                             size_t threads,
                             size_t quantiles,
                             struct VegaIndexReport *out);

/**
 * `(2/π)·|atan2(a, b) − atan2(b, a)|`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum VegaStatus vega_angular_difference(double a, double b, double *out);

/**
 * `|y_i − y_j| / (population²·mean)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum VegaStatus vega_pair_contribution(double y_i,
                                       double y_j,
                                       double population,
                                       double mean,
                                       double *out);

/**
 * Decompose V of `sample` by the `len` NUL-terminated UTF-8 `labels`.
 *
 * # Safety
 * `sample` must be a live handle, `labels` must point to `len` valid C
 * strings where `len` equals the sample length, and `out` must be valid.
 */
enum VegaStatus vega_decompose(const struct VegaSample *sample,
                               const char *const *labels,
                               size_t len,
                               struct VegaDecomposition **out);

/**
 * Totals of a decomposition.
 *
 * # Safety
 * `decomposition` must be a live handle; `out` a valid pointer.
 */
enum VegaStatus vega_decomposition_summary(const struct VegaDecomposition *decomposition,
                                           struct VegaDecompositionSummary *out);

/**
 * Group `index` in first-appearance order.
 *
 * # Safety
 * `decomposition` must be a live handle; `out` a valid pointer.
 */
enum VegaStatus vega_decomposition_group(const struct VegaDecomposition *decomposition,
                                         size_t index,
                                         struct VegaGroupTerm *out);

/**
 * Release a decomposition. Null is ignored.
 *
 * # Safety
 * `decomposition` must come from [`vega_decompose`] and not be used
 * afterwards.
 */
void vega_decomposition_free(struct VegaDecomposition *decomposition);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VEGA_H */
