#ifndef RESTRICTED_SERIES_H
#define RESTRICTED_SERIES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define RS_OK 0

/**
 * Malformed arguments.
 */
#define RS_ERR_INVALID_INPUT 1

/**
 * A theorem's hypothesis does not hold for the inputs.
 */
#define RS_ERR_NOT_APPLICABLE 2

/**
 * The computation itself failed (budget, horizon, verification).
 */
#define RS_ERR_INTERNAL 3

#define RS_ERR_NULL_POINTER 4

#define RS_ERR_PANIC 5

#define RS_THEOREM_AUTO 0

#define RS_THEOREM_1 1

#define RS_THEOREM_2 2

#define RS_THEOREM_3 3

typedef struct RsCertificate RsCertificate;

/**
 * Finite coefficient set Λ.
 */
typedef struct RsLambda RsLambda;

/**
 * Region accumulating at a boundary point ζ.
 */
typedef struct RsRegion RsRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; do not free.
 */
const char *rs_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rs_string_free(char *s);

/**
 * Builds Λ from `n` interleaved `(re, im)` pairs.
 *
 * # Safety
 * `re_im` must point to `2 * n` doubles; `out` must be writable.
 */
int32_t rs_lambda_new(const double *re_im, size_t n, struct RsLambda **out);

/**
 * # Safety
 * `lambda` must come from [`rs_lambda_new`] and not have been freed.
 */
void rs_lambda_free(struct RsLambda *lambda);

/**
 * Classification of Λ as a JSON string (free with [`rs_string_free`]).
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t rs_lambda_classify_json(const struct RsLambda *lambda, char **out);

/**
 * Region from a spec such as `disk:0.95,0.1` and an angle such as
 * `turns:1/4 exact`. A null `spec` selects `disk:0.95,0.1`.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be writable.
 */
int32_t rs_region_parse(const char *spec, const char *zeta, struct RsRegion **out);

/**
 * # Safety
 * `region` must come from [`rs_region_parse`] and not have been freed.
 */
void rs_region_free(struct RsRegion *region);

/**
 * Runs an engine (`RS_THEOREM_*`) for target `w` and accuracy `eps`, with
 * `prefix_len` fixed leading coefficients given as interleaved pairs
 * (`prefix` may be null when `prefix_len` is 0).
 *
 * # Safety
 * Pointers must be valid; `prefix` must hold `2 * prefix_len` doubles.
 */
int32_t rs_approximate(const struct RsLambda *lambda,
                       const struct RsRegion *region,
                       int32_t theorem,
                       double w_re,
                       double w_im,
                       double eps,
                       const double *prefix,
                       size_t prefix_len,
                       struct RsCertificate **out);

/**
 * Parses a certificate from JSON.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
int32_t rs_certificate_from_json(const char *json, struct RsCertificate **out);

/**
 * # Safety
 * Pointers must be valid.
 */
int32_t rs_certificate_to_json(const struct RsCertificate *cert, char **out);

/**
 * `ε − achieved error − tail bound` as recorded in the certificate.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t rs_certificate_margin(const struct RsCertificate *cert, double *out);

/**
 * # Safety
 * `cert` must come from this library and not have been freed.
 */
void rs_certificate_free(struct RsCertificate *cert);

/**
 * Independent re-check. `valid` receives 1 or 0 and `margin` the recomputed
 * margin; either may be null.
 *
 * # Safety
 * Handle pointers must be valid.
 */
int32_t rs_verify(const struct RsLambda *lambda,
                  const struct RsCertificate *cert,
                  const struct RsRegion *region,
                  int32_t *valid,
                  double *margin);

/**
 * Exact minimum of `|Σ_{n<len} λ_n τⁿ − w|` by exhaustive search.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t rs_oracle_best_error(const struct RsLambda *lambda,
                             double tau_re,
                             double tau_im,
                             double w_re,
                             double w_im,
                             size_t len,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESTRICTED_SERIES_H */
