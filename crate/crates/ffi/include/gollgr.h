/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GOLLGR_H
#define GOLLGR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GollgrStatus {
  GOLLGR_STATUS_OK = 0,
  GOLLGR_STATUS_NULL_POINTER = 1,
  GOLLGR_STATUS_INVALID_ARGUMENT = 2,
  GOLLGR_STATUS_DOMAIN = 3,
  GOLLGR_STATUS_NUMERICAL = 4,
  GOLLGR_STATUS_NON_CONVERGENCE = 5,
  GOLLGR_STATUS_BUFFER_TOO_SMALL = 6,
  GOLLGR_STATUS_PANIC = 7,
} GollgrStatus;

typedef enum GollgrSubmodel {
  GOLLGR_SUBMODEL_GOLLGR = 0,
  GOLLGR_SUBMODEL_OLLGR = 1,
  GOLLGR_SUBMODEL_EGR = 2,
  GOLLGR_SUBMODEL_GR = 3,
} GollgrSubmodel;

/**
 * Opaque result of a distribution fit.
 */
typedef struct GollgrFit GollgrFit;

/**
 * Opaque parameter set.
 */
typedef struct GollgrParams GollgrParams;

/**
 * Opaque regression fit together with the data it was fitted to.
 */
typedef struct GollgrRegression GollgrRegression;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *gollgr_last_error(void);

/**
 * # Safety
 * `out_handle` must be writable storage for one handle pointer.
 */
enum GollgrStatus gollgr_params_new(double alpha,
                                    double beta,
                                    double delta,
                                    double theta,
                                    struct GollgrParams **out_handle);

/**
 * # Safety
 * `handle` must come from `gollgr_params_new` and not be used afterwards.
 */
void gollgr_params_free(struct GollgrParams *handle);

/**
 * Density at x.
 *
 * # Safety
 * `handle` must be a live parameter handle and `out_value` writable.
 */
enum GollgrStatus gollgr_pdf(const struct GollgrParams *handle, double x, double *out_value);

/**
 * Distribution function at x.
 *
 * # Safety
 * `handle` must be a live parameter handle and `out_value` writable.
 */
enum GollgrStatus gollgr_cdf(const struct GollgrParams *handle, double x, double *out_value);

/**
 * Survival function at x.
 *
 * # Safety
 * `handle` must be a live parameter handle and `out_value` writable.
 */
enum GollgrStatus gollgr_sf(const struct GollgrParams *handle, double x, double *out_value);

/**
 * Hazard rate at x.
 *
 * # Safety
 * `handle` must be a live parameter handle and `out_value` writable.
 */
enum GollgrStatus gollgr_hrf(const struct GollgrParams *handle, double x, double *out_value);

/**
 * Quantile at probability u in (0, 1).
 *
 * # Safety
 * `handle` must be a live parameter handle and `out_value` writable.
 */
enum GollgrStatus gollgr_quantile(const struct GollgrParams *handle, double u, double *out_value);

/**
 * Writes n seeded draws into `out_values`.
 *
 * # Safety
 * `out_values` must have room for `n` doubles.
 */
enum GollgrStatus gollgr_sample(const struct GollgrParams *handle,
                                size_t n,
                                uint64_t seed,
                                double *out_values);

/**
 * Maximum-likelihood fit of an uncensored sample. A fit that did not
 * converge is still returned; check the flag from `gollgr_fit_summary`.
 *
 * # Safety
 * `x` must point to `n` doubles and `out_handle` be writable.
 */
enum GollgrStatus gollgr_fit(const double *x,
                             size_t n,
                             enum GollgrSubmodel submodel,
                             struct GollgrFit **out_handle);

/**
 * # Safety
 * `handle` must come from `gollgr_fit` and not be used afterwards.
 */
void gollgr_fit_free(struct GollgrFit *handle);

/**
 * Estimates (alpha, beta, delta, theta), their standard errors (NaN when
 * unavailable or pinned by the submodel) and log-likelihood.
 *
 * # Safety
 * `estimates` and `std_errors` must have room for 4 doubles each; any
 * out-pointer may be NULL to skip it.
 */
enum GollgrStatus gollgr_fit_summary(const struct GollgrFit *handle,
                                     double *estimates,
                                     double *std_errors,
                                     double *loglik,
                                     bool *converged);

/**
 * Censored regression. `covariates` is row-major n × q without the
 * intercept column, which is added; `status` is 1 for a failure and 0 for
 * a censored time.
 *
 * # Safety
 * `times` and `status` must point to `n` elements and `covariates` to
 * `n * q` doubles (or be NULL when q = 0).
 */
enum GollgrStatus gollgr_regression_fit(const double *times,
                                        const uint8_t *status,
                                        const double *covariates,
                                        size_t n,
                                        size_t q,
                                        enum GollgrSubmodel submodel,
                                        struct GollgrRegression **out_handle);

/**
 * # Safety
 * `handle` must come from `gollgr_regression_fit` and not be used afterwards.
 */
void gollgr_regression_free(struct GollgrRegression *handle);

/**
 * Coefficients in the order alpha, beta, delta-link (q + 1), theta-link
 * (q + 1). With `out_values` NULL only the required length is written.
 *
 * # Safety
 * `out_values` must have room for `capacity` doubles.
 */
enum GollgrStatus gollgr_regression_coefficients(const struct GollgrRegression *handle,
                                                 double *out_values,
                                                 size_t capacity,
                                                 size_t *out_len,
                                                 double *loglik,
                                                 bool *converged);

/**
 * Quantile residuals of the fitted rows; requires a converged fit.
 *
 * # Safety
 * `out_values` must have room for `capacity` doubles.
 */
enum GollgrStatus gollgr_regression_residuals(const struct GollgrRegression *handle,
                                              double *out_values,
                                              size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOLLGR_H */
