#ifndef RIESZ_LAB_H
#define RIESZ_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlKind {
  RL_KIND_FIRST = 0,
  RL_KIND_SECOND = 1,
} RlKind;

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_POINTER = 1,
  RL_STATUS_INVALID_ARGUMENT = 2,
  RL_STATUS_PARSE = 3,
  RL_STATUS_UNKNOWN_ENTRY = 4,
  RL_STATUS_DOMAIN = 5,
  // A numerical tolerance was not met.
  RL_STATUS_NUMERICAL = 6,
  RL_STATUS_PANIC = 7,
} RlStatus;

// Opaque series handle.
typedef struct RlSeries RlSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rl_version(void);

// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to
// `len`) and returns the full message length excluding the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
uintptr_t rl_last_error(char *buf, uintptr_t len);

// Opens a catalog entry by name. The handle carries the entry's limit function.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum RlStatus rl_series_catalog(const char *name, struct RlSeries **out_handle);

// Reads a series JSON file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum RlStatus rl_series_from_file(const char *path, struct RlSeries **out_handle);

// Finite series `Σ (re[i] + i·im[i]) e^{−lambda[i] s}` with strictly increasing `lambda`.
//
// # Safety
// `lambda`, `re` and `im` must each point to `n` readable doubles; `out` must be valid.
enum RlStatus rl_series_finite(const double *lambda,
                               const double *re,
                               const double *im,
                               uintptr_t n,
                               struct RlSeries **out_handle);

// Releases a handle; null is ignored.
//
// # Safety
// `h` must come from an `rl_series_*` constructor and not be used afterwards.
void rl_series_free(struct RlSeries *h);

// Riesz mean of order `k` at `s` and `x`.
//
// # Safety
// `h` must be a live handle and the output pointers valid.
enum RlStatus rl_riesz_mean(const struct RlSeries *h,
                            double k,
                            enum RlKind kind,
                            double s_re,
                            double s_im,
                            double x,
                            double *out_re,
                            double *out_im);

// Limit of the Riesz means sampled at `samples` points of `[x_max/4, x_max]`. First-kind
// means are extrapolated in `1/x`. `converged` reports whether the last-quartile spread is
// below `tolerance`; non-convergence is not an error.
//
// # Safety
// `h` must be a live handle and the output pointers valid.
enum RlStatus rl_riesz_limit(const struct RlSeries *h,
                             double k,
                             enum RlKind kind,
                             double s_re,
                             double s_im,
                             double x_max,
                             uintptr_t samples,
                             double tolerance,
                             double *out_re,
                             double *out_im,
                             double *out_tail,
                             bool *out_converged);

// Pointwise Bohr–Cahen estimate over the default window of the series.
//
// # Safety
// `h` must be a live handle and `out_value` valid.
enum RlStatus rl_abscissa(const struct RlSeries *h,
                          double k,
                          enum RlKind kind,
                          uintptr_t samples,
                          double *out_value);

// Limit function at `s` (catalog oracle, or the sum itself for a finite series).
//
// # Safety
// `h` must be a live handle and the output pointers valid.
enum RlStatus rl_limit(const struct RlSeries *h,
                       double s_re,
                       double s_im,
                       double *out_re,
                       double *out_im);

// Summatory function `S_x^k(0)` from the limit function by Perron's formula with default
// contour and truncation. Returns `RL_STATUS_NUMERICAL` when the tail bound exceeds
// `tolerance`.
//
// # Safety
// `h` must be a live handle and the output pointers valid.
enum RlStatus rl_perron(const struct RlSeries *h,
                        double k,
                        double x,
                        double tolerance,
                        double *out_re,
                        double *out_im,
                        double *out_tail);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RIESZ_LAB_H */
