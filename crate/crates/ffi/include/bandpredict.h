#ifndef BANDPREDICT_H
#define BANDPREDICT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BpStatus {
  BP_STATUS_OK = 0,
  /**
   * A scalar argument is out of range or a buffer has the wrong length.
   */
  BP_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Input rejected by validation (degenerate support, non-causal kernel, ...).
   */
  BP_STATUS_VALIDATION = 2,
  /**
   * Kernel overflow or failed truncation/reconstruction.
   */
  BP_STATUS_STABILITY = 3,
  /**
   * Frequency grid too coarse for the window length.
   */
  BP_STATUS_RESOLUTION = 4,
  /**
   * Window too short for the requested evaluation.
   */
  BP_STATUS_SIZE = 5,
  BP_STATUS_NULL_POINTER = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  BP_STATUS_PANIC = 7,
} BpStatus;

/**
 * Which condition established band-limitedness.
 */
typedef enum BpCondition {
  BP_CONDITION_NONE = 0,
  BP_CONDITION_COSINE_FLAT = 1,
  BP_CONDITION_SINE_VANISHING = 2,
  BP_CONDITION_BOTH_DEGENERATE = 3,
} BpCondition;

typedef enum BpMode {
  BP_MODE_SYMMETRIC = 0,
  BP_MODE_ANTISYMMETRIC = 1,
} BpMode;

/**
 * Opaque causal kernel.
 */
typedef struct BpKernel BpKernel;

/**
 * Opaque window of samples `x(-(L-1)), ..., x(0)`.
 */
typedef struct BpWindow BpWindow;

typedef struct BpDetectReport {
  enum BpCondition condition;
  /**
   * NaN when no condition fired.
   */
  double omega_hat;
  /**
   * -1 when no condition fired.
   */
  int64_t omega_index;
  double a_hat;
  double residual_i;
  double residual_ii;
} BpDetectReport;

typedef struct BpPredictSummary {
  int64_t first_t;
  size_t burn_in;
  double forecast_next;
  double error_l2;
  double error_linf;
  double relative_error_l2;
  double relative_error_linf;
} BpPredictSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full message length without the NUL.
 * Returns 0 when the last call succeeded.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t bp_last_error_message(char *buf, size_t len);

/**
 * Creates a window from `len` samples, oldest first, ending at time 0.
 *
 * # Safety
 * `values` must be valid for `len` reads; `out` must be writable.
 */
enum BpStatus bp_window_new(const double *values, size_t len, struct BpWindow **out);

/**
 * # Safety
 * `w` must be null or a handle from this library not yet freed.
 */
void bp_window_free(struct BpWindow *w);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t bp_window_len(const struct BpWindow *w);

/**
 * Copies the samples into `out`, which must hold exactly `bp_window_len` values.
 *
 * # Safety
 * `w` must be a live handle; `out` must be valid for `len` writes.
 */
enum BpStatus bp_window_values(const struct BpWindow *w, double *out, size_t len);

/**
 * Cosine transform on the grid `j pi / m`; `out` holds `m + 1` values.
 *
 * # Safety
 * `w` must be a live handle; `out` must be valid for `len` writes.
 */
enum BpStatus bp_xi1(const struct BpWindow *w, size_t m, double *out, size_t len);

/**
 * Sine transform: the tail on the grid into `out` (`m + 1` values) and the
 * scalar component into `scalar`.
 *
 * # Safety
 * `w` must be a live handle; `out` must be valid for `len` writes and
 * `scalar` for one.
 */
enum BpStatus bp_xi2(const struct BpWindow *w, size_t m, double *out, size_t len, double *scalar);

/**
 * Recovers a window of `length` samples from `count = m + 1` cosine
 * transform samples.
 *
 * # Safety
 * `samples` must be valid for `count` reads; `out` must be writable.
 */
enum BpStatus bp_inv_xi1(const double *samples, size_t count, size_t length, struct BpWindow **out);

/**
 * Recovers a window from the sine transform tail and its scalar component.
 *
 * # Safety
 * `tail` must be valid for `count` reads; `out` must be writable.
 */
enum BpStatus bp_inv_xi2(const double *tail,
                         size_t count,
                         double scalar,
                         size_t length,
                         struct BpWindow **out);

/**
 * Band-limitedness detection on the grid `j pi / m`.
 *
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum BpStatus bp_detect(const struct BpWindow *w, size_t m, double tol, struct BpDetectReport *out);

/**
 * Builds the causal taps for `(gamma, mu, q)`; `n` is a power of two of at
 * least 4096 and bounds the tap count by `n / 2 + 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BpStatus bp_kernel_build(double gamma,
                              double mu,
                              double q,
                              size_t n,
                              double trunc_tol,
                              struct BpKernel **out);

/**
 * # Safety
 * `k` must be null or a handle from this library not yet freed.
 */
void bp_kernel_free(struct BpKernel *k);

/**
 * Number of taps `T + 1`, or 0 for a null handle.
 *
 * # Safety
 * `k` must be null or a live handle.
 */
size_t bp_kernel_len(const struct BpKernel *k);

/**
 * Sum of the absolute values of the dropped taps, or NaN for a null handle.
 *
 * # Safety
 * `k` must be null or a live handle.
 */
double bp_kernel_tail_mass(const struct BpKernel *k);

/**
 * Copies the taps `k(0), ..., k(T)` into `out`.
 *
 * # Safety
 * `k` must be a live handle; `out` must be valid for `len` writes.
 */
enum BpStatus bp_kernel_taps(const struct BpKernel *k, double *out, size_t len);

/**
 * Evaluates the transfer function at `z = re + i im`, `|z| >= 1`. When the
 * value exceeds the floating-point range `overflow` is set to 1 and the
 * outputs are NaN.
 *
 * # Safety
 * `out_re`, `out_im` and `overflow` must be writable.
 */
enum BpStatus bp_transfer_at(double gamma,
                             double mu,
                             double q,
                             double re,
                             double im,
                             double *out_re,
                             double *out_im,
                             int32_t *overflow);

/**
 * One-step prediction over the window; per-time values stay on the Rust side.
 *
 * # Safety
 * `w` and `k` must be live handles; `out` must be writable.
 */
enum BpStatus bp_predict(const struct BpWindow *w,
                         const struct BpKernel *k,
                         struct BpPredictSummary *out);

/**
 * Unit-norm raised-cosine band-limited window of bandwidth `omega`,
 * synthesized on the grid `j pi / m`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BpStatus bp_generate(enum BpMode mode,
                          double omega,
                          size_t length,
                          uint64_t seed,
                          size_t m,
                          struct BpWindow **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANDPREDICT_H */
