#ifndef TORIC_WHB_H
#define TORIC_WHB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum TwhbStatus {
  TWHB_STATUS_OK = 0,
  TWHB_STATUS_NULL_POINTER = 1,
  TWHB_STATUS_INVALID_UTF8 = 2,
  TWHB_STATUS_PARSE = 3,
  TWHB_STATUS_INPUT = 4,
  TWHB_STATUS_INVALID_FAN = 5,
  TWHB_STATUS_BUDGET = 6,
  /**
   * Output buffer too small; the needed length was still written.
   */
  TWHB_STATUS_BUFFER_TOO_SMALL = 7,
  TWHB_STATUS_INTERNAL = 8,
  TWHB_STATUS_PANIC = 9,
} TwhbStatus;

/**
 * A projectivized split bundle: its summands and total-space fan.
 */
typedef struct TwhbBundle TwhbBundle;

/**
 * An immutable fan.
 */
typedef struct TwhbFan TwhbFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *twhb_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void twhb_string_free(char *s);

/**
 * Parses a fan file (`{"dim", "rays", "max_cones"}`). Structural errors are
 * reported; smoothness and completeness are checked by `twhb_fan_is_valid`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TwhbStatus twhb_fan_from_json(const char *json, struct TwhbFan **out);

/**
 * A named catalog fan. Pass -1 for parameters that do not apply.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TwhbStatus twhb_fan_from_catalog(const char *name,
                                      int64_t d,
                                      int64_t a,
                                      int64_t b,
                                      int64_t alpha,
                                      struct TwhbFan **out);

/**
 * # Safety
 * `fan` must come from this library, or be NULL.
 */
void twhb_fan_free(struct TwhbFan *fan);

/**
 * Dimension, ray count and Picard number.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwhbStatus twhb_fan_shape(const struct TwhbFan *fan,
                               size_t *dim,
                               size_t *num_rays,
                               size_t *picard_number);

/**
 * Whether the fan is smooth and complete. On `false` the reason is
 * available from `twhb_last_error` even though the call succeeded.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwhbStatus twhb_fan_is_valid(const struct TwhbFan *fan, bool *out);

/**
 * Whether every primitive relation has positive degree.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwhbStatus twhb_fan_is_fano(const struct TwhbFan *fan, bool *out);

/**
 * The fan file as a JSON string.
 *
 * # Safety
 * All pointers must be valid; free the result with `twhb_string_free`.
 */
enum TwhbStatus twhb_fan_to_json(const struct TwhbFan *fan, char **out);

/**
 * Primitive relations as a JSON array of
 * `{collection, target, coeffs, degree, extremal}` with zero-based ray indices.
 *
 * # Safety
 * All pointers must be valid; free the result with `twhb_string_free`.
 */
enum TwhbStatus twhb_fan_relations_json(const struct TwhbFan *fan, char **out);

/**
 * Admissible primes up to `p_max`, ascending. Writes at most `cap` primes
 * into `primes` and the full count into `len`.
 *
 * # Safety
 * `primes` must have room for `cap` values (it may be NULL when `cap` is 0).
 */
enum TwhbStatus twhb_fan_admissible_primes(const struct TwhbFan *fan,
                                           uint64_t p_max,
                                           uint64_t *primes,
                                           size_t cap,
                                           size_t *len);

/**
 * Builds `P(O + O(E_1) + ... + O(E_r))` over `base`. `coeffs` holds the `r`
 * summands row by row, each with one coefficient per base ray.
 *
 * # Safety
 * `coeffs` must point to `num_summands * num_rays(base)` values.
 */
enum TwhbStatus twhb_bundle_new(const struct TwhbFan *base,
                                const int64_t *coeffs,
                                size_t num_summands,
                                struct TwhbBundle **out);

/**
 * A named catalog bundle. If `equation` is not NULL it receives the
 * bundle's hypersurface equation in text form.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be valid.
 */
enum TwhbStatus twhb_bundle_from_catalog(const char *name,
                                         int64_t d,
                                         int64_t a,
                                         int64_t b,
                                         struct TwhbBundle **out,
                                         char **equation);

/**
 * # Safety
 * `bundle` must come from this library, or be NULL.
 */
void twhb_bundle_free(struct TwhbBundle *bundle);

/**
 * A copy of the total-space fan as a new fan handle.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwhbStatus twhb_bundle_total_fan(const struct TwhbBundle *bundle, struct TwhbFan **out);

/**
 * Number of nontrivial summands `r`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwhbStatus twhb_bundle_rank(const struct TwhbBundle *bundle, size_t *r);

/**
 * Checks a hypersurface given in text form (`X3*X4*Y1^2+...`, where `Xi`
 * is a lifted base ray and `Yj` a fiber ray) over `F_p`. The JSON result has
 * `homogeneous`, and when homogeneous also `wildness` and `smoothness`.
 *
 * # Safety
 * All pointers must be valid; free the result with `twhb_string_free`.
 */
enum TwhbStatus twhb_bundle_check_equation(const struct TwhbBundle *bundle,
                                           const char *equation,
                                           uint64_t p,
                                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_WHB_H */
