/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef H2ION_H
#define H2ION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every function.
typedef enum H2ionStatus {
  H2ION_STATUS_OK = 0,
  // Null pointer, non-UTF-8 string, non-positive R or similar.
  H2ION_STATUS_INVALID_ARGUMENT = 1,
  // Label parsed but not solvable, or unknown label.
  H2ION_STATUS_UNSUPPORTED_STATE = 2,
  // The minimizer ran out of budget; the handle still holds the best point.
  H2ION_STATUS_NOT_CONVERGED = 3,
  // Root bracketing, quadrature or other numerical failure.
  H2ION_STATUS_NUMERICAL_ERROR = 4,
  // A Rust panic was caught at the boundary.
  H2ION_STATUS_INTERNAL = 5,
} H2ionStatus;

// Opaque solve result.
typedef struct H2ionResult H2ionResult;

// Transition data for the 1ssg -> 2psu pair.
typedef struct H2ionTransition {
  double r;
  double energy_g;
  double energy_u;
  double delta_e;
  double q_z;
  double f01;
} H2ionTransition;

// Outcome of the shooting solver.
typedef struct H2ionExact {
  double p;
  double separation_constant;
  double total_energy;
} H2ionExact;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *h2ion_version(void);

// Message for the last failure on this thread, or null. Valid until the next
// call into the library from the same thread.
const char *h2ion_last_error(void);

// Minimize the energy of `state` at distance `r`.
//
// `quad_order` and `budget` may be zero for the defaults. On `Ok` and on
// `NotConverged` `*out` receives a handle that must be released with
// [`h2ion_result_free`]; otherwise `*out` is set to null.
//
// # Safety
// `state` must be a NUL-terminated string and `out` a valid pointer.
enum H2ionStatus h2ion_solve(const char *state,
                             double r,
                             uint32_t quad_order,
                             uint64_t budget,
                             struct H2ionResult **out);

// Release a handle; null is ignored.
//
// # Safety
// `result` must come from [`h2ion_solve`] and not have been freed already.
void h2ion_result_free(struct H2ionResult *result);

// Total energy (Ry).
//
// # Safety
// `result` must be a live handle and `out` a valid pointer.
enum H2ionStatus h2ion_result_total_energy(const struct H2ionResult *result, double *out);

// Electronic energy `E_total - 2/R` (Ry).
//
// # Safety
// As [`h2ion_result_total_energy`].
enum H2ionStatus h2ion_result_electronic_energy(const struct H2ionResult *result, double *out);

// Optimized `p`.
//
// # Safety
// As [`h2ion_result_total_energy`].
enum H2ionStatus h2ion_result_p(const struct H2ionResult *result, double *out);

// First-order separation constants from the ξ and η equations.
//
// # Safety
// `result` must be a live handle; both out-pointers valid.
enum H2ionStatus h2ion_result_separation_constants(const struct H2ionResult *result,
                                                   double *a1_xi,
                                                   double *a1_eta);

// Trial parameters in the order alpha, gamma, a1, a2, b2, b3, p.
//
// # Safety
// `result` must be a live handle and `out` point to 7 writable doubles.
enum H2ionStatus h2ion_result_params(const struct H2ionResult *result, double *out);

// Oscillator strength from two handles at the same `R` (gerade first).
//
// # Safety
// Both handles must be live and `out` valid.
enum H2ionStatus h2ion_result_transition(const struct H2ionResult *gerade,
                                         const struct H2ionResult *ungerade,
                                         struct H2ionTransition *out);

// Solve both states at `r` and compute the oscillator strength. A non-zero
// `oracle_gap` takes the energy gap from the shooting solver.
//
// # Safety
// `out` must be a valid pointer.
enum H2ionStatus h2ion_oscillator(double r, int32_t oracle_gap, struct H2ionTransition *out);

// Exact `(p, A, E_total)` from the shooting solver. `p_hint <= 0` uses the
// built-in seed table.
//
// # Safety
// `state` must be a NUL-terminated string and `out` a valid pointer.
enum H2ionStatus h2ion_exact(const char *state, double r, double p_hint, struct H2ionExact *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* H2ION_H */
