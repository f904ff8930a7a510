#ifndef MVPOISSON_H
#define MVPOISSON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MVP_METHOD_AUTO 0

#define MVP_METHOD_SINGLE_INDEX 1

#define MVP_METHOD_INVERTIBLE 2

#define MVP_METHOD_ENUMERATE 3

#define MVP_SNF_P 0

#define MVP_SNF_D 1

#define MVP_SNF_Q 2

typedef enum MvpStatus {
  MVP_STATUS_OK = 0,
  MVP_STATUS_NULL_POINTER = 1,
  MVP_STATUS_INVALID_INPUT = 2,
  MVP_STATUS_METHOD_NOT_APPLICABLE = 3,
  MVP_STATUS_INTERNAL = 4,
  MVP_STATUS_OVERFLOW = 5,
  MVP_STATUS_BUFFER_TOO_SMALL = 6,
  MVP_STATUS_PANIC = 7,
} MvpStatus;

typedef enum MvpMethodTag {
  MVP_METHOD_TAG_SINGLE_INDEX = 0,
  MVP_METHOD_TAG_INVERTIBLE = 1,
  MVP_METHOD_TAG_ENUMERATE_ONLY = 2,
} MvpMethodTag;

/**
 * Opaque model handle.
 */
typedef struct MvpModel MvpModel;

/**
 * Opaque Smith normal form handle.
 */
typedef struct MvpSnf MvpSnf;

typedef struct MvpPmfResult {
  double log_prob;
  double prob;
  enum MvpMethodTag method;
  uint64_t terms;
  bool clamped;
} MvpPmfResult;

typedef struct MvpSampleReport {
  double exact_prob;
  double empirical_prob;
  uint64_t hits;
  uint64_t n_samples;
  double z_score;
  uint64_t seed;
  uint32_t shards;
} MvpSampleReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mvp_last_error_message(void);

/**
 * Builds a model from a row-major `rows × cols` matrix and `cols` rates.
 *
 * # Safety
 * `a` must point to `rows * cols` readable values, `lambda` to `cols`, and
 * `out` must be writable. The handle written to `out` must be released with
 * [`mvp_model_free`].
 */
enum MvpStatus mvp_model_new(const uint64_t *a,
                             size_t rows,
                             size_t cols,
                             const double *lambda,
                             struct MvpModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from [`mvp_model_new`] not yet freed.
 */
void mvp_model_free(struct MvpModel *model);

/**
 * Number of rows of the original matrix, or 0 for NULL.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
size_t mvp_model_rows(const struct MvpModel *model);

/**
 * Number of columns of the original matrix, or 0 for NULL.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
size_t mvp_model_cols(const struct MvpModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum MvpStatus mvp_model_method(const struct MvpModel *model, enum MvpMethodTag *out);

/**
 * `P(Y = b)` with one of the `MVP_METHOD_*` paths.
 *
 * # Safety
 * `model` must be a live handle, `b` must point to `len` values and `out`
 * must be writable.
 */
enum MvpStatus mvp_pmf(const struct MvpModel *model,
                       const int64_t *b,
                       size_t len,
                       uint32_t method,
                       struct MvpPmfResult *out);

/**
 * Closed-form generating function at `z ∈ [0, 1]^rows`.
 *
 * # Safety
 * `model` must be a live handle, `z` must point to `len` values and `out`
 * must be writable.
 */
enum MvpStatus mvp_gf_eval(const struct MvpModel *model, const double *z, size_t len, double *out);

/**
 * Generating-function series truncated to `b ∈ [0, degree]^rows`.
 *
 * # Safety
 * Same as [`mvp_gf_eval`].
 */
enum MvpStatus mvp_gf_eval_series(const struct MvpModel *model,
                                  const double *z,
                                  size_t len,
                                  uint32_t degree,
                                  double *out);

/**
 * Monte Carlo check of `P(Y = b)` over `n_samples` draws on `shards`
 * threads; `shards = 1` is the reference stream layout.
 *
 * # Safety
 * `model` must be a live handle, `b` must point to `len` values and `out`
 * must be writable.
 */
enum MvpStatus mvp_sample(const struct MvpModel *model,
                          const int64_t *b,
                          size_t len,
                          uint64_t n_samples,
                          uint64_t seed,
                          uint32_t shards,
                          struct MvpSampleReport *out);

/**
 * Smith normal form of a row-major `rows × cols` integer matrix.
 *
 * # Safety
 * `a` must point to `rows * cols` readable values and `out` must be
 * writable. Release the handle with [`mvp_snf_free`].
 */
enum MvpStatus mvp_snf_new(const int64_t *a, size_t rows, size_t cols, struct MvpSnf **out);

/**
 * # Safety
 * `handle` must be NULL or a handle from [`mvp_snf_new`] not yet freed.
 */
void mvp_snf_free(struct MvpSnf *handle);

/**
 * Rank, or 0 for NULL.
 *
 * # Safety
 * `handle` must be NULL or a live handle.
 */
size_t mvp_snf_rank(const struct MvpSnf *handle);

/**
 * Copies P (`MVP_SNF_P`, rows × rows), D (`MVP_SNF_D`, rows × cols) or Q
 * (`MVP_SNF_Q`, cols × cols) row-major into `buf`.
 *
 * # Safety
 * `handle` must be a live handle and `buf` must be writable for `len`
 * values.
 */
enum MvpStatus mvp_snf_copy_matrix(const struct MvpSnf *handle,
                                   uint32_t which,
                                   int64_t *buf,
                                   size_t len);

/**
 * Copies the `rank` elementary divisors into `buf`.
 *
 * # Safety
 * `handle` must be a live handle and `buf` must be writable for `len`
 * values.
 */
enum MvpStatus mvp_snf_copy_divisors(const struct MvpSnf *handle, int64_t *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MVPOISSON_H */
