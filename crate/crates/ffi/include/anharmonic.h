#ifndef ANHARMONIC_H
#define ANHARMONIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of every fallible call.
 */
typedef enum AhStatus {
  AH_STATUS_OK = 0,
  AH_STATUS_NULL_POINTER = 1,
  AH_STATUS_INVALID_UTF8 = 2,
  AH_STATUS_PARSE = 3,
  AH_STATUS_INVALID_SPEC = 4,
  AH_STATUS_PERTURBATIVE_GUARD = 5,
  AH_STATUS_UNSUPPORTED = 6,
  AH_STATUS_GRID = 7,
  AH_STATUS_NUMERIC = 8,
  AH_STATUS_DOMAIN = 9,
  AH_STATUS_INVALID_ARGUMENT = 10,
  AH_STATUS_BUFFER_TOO_SMALL = 11,
  AH_STATUS_PANIC = 99,
} AhStatus;

/*
 Opaque handle to a validated-shape potential.
 */
typedef struct AhPotential AhPotential;

/*
 Measures of one potential. Fields that have no value are NaN and the
 matching flag is false.
 */
typedef struct AhMeasureReport {
  double eta_b;
  double eta_ng;
  double omega_r;
  double ground_energy;
  double det_sigma;
  double fidelity_to_reference;
  /*
   True when a reference frequency exists, so `eta_b`, `omega_r` and
   `fidelity_to_reference` are set.
   */
  bool has_reference;
  /*
   True when the covariance came from closed-form moments instead of quadrature.
   */
  bool closed_form_moments;
} AhMeasureReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the most recent call on this thread, or NULL if it
 succeeded. The pointer stays valid until the next call on this thread.
 */
const char *ah_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *ah_version(void);

/*
 Parses a text spec such as `morse:D=1,alpha=0.5` into a new handle.

 # Safety
 `text` must be NULL or a NUL-terminated string; `out` must be NULL or
 writable.
 */
enum AhStatus ah_potential_parse(const char *text, struct AhPotential **out);

/*
 Releases a handle. NULL is ignored.

 # Safety
 `p` must be NULL or a handle from this library that has not been freed.
 */
void ah_potential_free(struct AhPotential *p);

/*
 Copy of `p` with parameter `name` replaced by `value`.

 # Safety
 `p` must be a live handle or NULL, `name` a NUL-terminated string or
 NULL, and `out` writable or NULL.
 */
enum AhStatus ah_potential_with_parameter(const struct AhPotential *p,
                                          const char *name,
                                          double value,
                                          struct AhPotential **out);

/*
 Writes the canonical text form of `p` into `buf` (NUL-terminated) and
 its length without the NUL into `required`. Returns
 `AH_STATUS_BUFFER_TOO_SMALL` if `buf_len <= required`; `buf` may be NULL
 when only the length is wanted.

 # Safety
 `buf` must be NULL or writable for `buf_len` bytes; `required` must be writable.
 */
enum AhStatus ah_potential_format(const struct AhPotential *p,
                                  char *buf,
                                  size_t buf_len,
                                  size_t *required);

/*
 Evaluates both measures. `n_points == 0` and `target_tail <= 0` select
 the library defaults.

 # Safety
 `p` must be a live handle or NULL; `out` writable or NULL.
 */
enum AhStatus ah_measure(const struct AhPotential *p,
                         size_t n_points,
                         double target_tail,
                         struct AhMeasureReport *out);

/*
 Reference frequency of `p`; `present` is false (and `omega` NaN) where none exists.

 # Safety
 `p` must be a live handle or NULL; outputs writable or NULL.
 */
enum AhStatus ah_reference_frequency(const struct AhPotential *p, double *omega, bool *present);

/*
 Analytic ground-state energy of a catalog potential.

 # Safety
 `p` must be a live handle or NULL; `out` writable or NULL.
 */
enum AhStatus ah_ground_energy(const struct AhPotential *p, double *out);

/*
 `h(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)` for `x >= 1/2`.

 # Safety
 `out` must be writable or NULL.
 */
enum AhStatus ah_entropy_h(double x, double *out);

/*
 First-order perturbative `eta_b` and `eta_ng` for `eps3 x^3 + eps4 x^4`.

 # Safety
 Outputs must be writable or NULL.
 */
enum AhStatus ah_perturbative(double eps3,
                              double eps4,
                              double omega,
                              double *eta_b,
                              double *eta_ng);

/*
 Corrected and printed `eta_ng(eta_b)` curve values; `has_printed` is
 false (and `printed` NaN) where the printed form is not evaluable.

 # Safety
 Outputs must be writable or NULL.
 */
enum AhStatus ah_parametric_curve(double eta_b,
                                  double *corrected,
                                  double *printed,
                                  bool *has_printed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANHARMONIC_H */
