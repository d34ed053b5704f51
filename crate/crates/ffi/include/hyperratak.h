#ifndef HYPERRATAK_H
#define HYPERRATAK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HrErrorCode {
  HR_ERROR_CODE_OK = 0,
  HR_ERROR_CODE_NULL_POINTER = 1,
  HR_ERROR_CODE_INVALID_ARGUMENT = 2,
  HR_ERROR_CODE_LOWER_PARAMETER_POLE = 3,
  HR_ERROR_CODE_ZERO_OMEGA = 4,
  HR_ERROR_CODE_AITKEN_DEGENERATE = 5,
  HR_ERROR_CODE_BAD_GAMMA = 6,
  HR_ERROR_CODE_ZERO_PIVOT = 7,
  HR_ERROR_CODE_OVERFLOW = 8,
  HR_ERROR_CODE_NO_CONVERGENCE = 9,
  HR_ERROR_CODE_PRECISION_EXHAUSTED = 10,
  HR_ERROR_CODE_PANIC = 11,
} HrErrorCode;

typedef enum HrMethod {
  HR_METHOD_FACTORIAL_LEVIN = 0,
  HR_METHOD_DRUMMOND = 1,
} HrMethod;

typedef enum HrOmega {
  HR_OMEGA_AN = 0,
  HR_OMEGA_A_NP1 = 1,
  HR_OMEGA_N_GAMMA_AN = 2,
  HR_OMEGA_AITKEN = 3,
} HrOmega;

typedef enum HrStatus {
  HR_STATUS_CONVERGED = 0,
  HR_STATUS_K_MAX = 1,
  HR_STATUS_OVERFLOW = 2,
} HrStatus;

/**
 * Opaque parameter set `(alpha; beta)`.
 */
typedef struct HrParams HrParams;

typedef struct HrEvalOptions {
  /**
   * An [`HrMethod`] value.
   */
  int32_t method;
  /**
   * An [`HrOmega`] value.
   */
  int32_t omega;
  double gamma;
  size_t n;
  double tol;
  size_t k_max;
} HrEvalOptions;

typedef struct HrResult {
  double re;
  double im;
  size_t k;
  bool converged;
  double err_est;
  enum HrStatus status;
} HrResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *hyperratak_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hyperratak_version(void);

/**
 * Defaults: factorial Levin-type, `omega = a_(n+1)`, `gamma = 2`, `n = 0`,
 * `tol = 8 eps`, `k_max = 2^20`.
 */
struct HrEvalOptions hyperratak_default_options(void);

/**
 * Creates a parameter set from `p` upper and `q` lower parameters given as
 * separate real and imaginary arrays. Imaginary arrays may be null for real
 * parameters; arrays of length zero may be null.
 *
 * # Safety
 * Non-null arrays must hold at least `p` (resp. `q`) values and `out` must
 * be valid for a write.
 */
enum HrErrorCode hyperratak_params_new(const double *alpha_re,
                                       const double *alpha_im,
                                       size_t p,
                                       const double *beta_re,
                                       const double *beta_im,
                                       size_t q,
                                       struct HrParams **out);

/**
 * Releases a parameter set. Null is ignored.
 *
 * # Safety
 * `params` must come from [`hyperratak_params_new`] and not be used again.
 */
void hyperratak_params_free(struct HrParams *params);

/**
 * Evaluates `pFq(alpha; beta; z)`. A null `opts` selects the defaults.
 * Reaching `k_max` or overflowing is not an error; see `out->status`.
 *
 * # Safety
 * `params` must be a live handle, `opts` null or valid, `out` valid for a
 * write.
 */
enum HrErrorCode hyperratak_pfq(const struct HrParams *params,
                                double z_re,
                                double z_im,
                                const struct HrEvalOptions *opts,
                                struct HrResult *out);

/**
 * Evaluates at increasing internal precision until two runs agree to
 * `target_bits`, and rounds the agreed value to double.
 *
 * # Safety
 * `params` must be a live handle; `re` and `im` valid for writes.
 */
enum HrErrorCode hyperratak_pfq_guaranteed(const struct HrParams *params,
                                           double z_re,
                                           double z_im,
                                           uint32_t target_bits,
                                           double *re,
                                           double *im);

/**
 * Diagonal Padé approximation of `exp(z)`, iterated until the stopping rule
 * holds with tolerance `tol` or `k_max` is reached.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum HrErrorCode hyperratak_pade_exp(double z_re,
                                     double z_im,
                                     double tol,
                                     size_t k_max,
                                     struct HrResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERRATAK_H */
