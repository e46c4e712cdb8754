#ifndef INTERSIEVE_H
#define INTERSIEVE_H

/* This file is generated by cbindgen from the intersieve-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes for every fallible call.
typedef enum IntersieveStatus {
  IntersieveStatus_Ok = 0,
  IntersieveStatus_NullPointer = 1,
  IntersieveStatus_InvalidUtf8 = 2,
  IntersieveStatus_ParseError = 3,
  IntersieveStatus_InvalidArgument = 4,
  IntersieveStatus_BudgetExceeded = 5,
  IntersieveStatus_InternalError = 6,
} IntersieveStatus;

// Opaque polynomial handle.
typedef struct IntersievePoly IntersievePoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message from the most recent failure on this thread, or NULL. The
// pointer stays valid until the next failing call on the same thread.
const char *intersieve_last_error_message(void);

// Library version as a static string.
const char *intersieve_version(void);

// Frees a string returned by this library.
//
// # Safety
// `s` must have been produced by an intersieve call and not freed before.
void intersieve_string_free(char *s);

// Parses a polynomial from the text grammar. `num_vars_hint < 0` infers
// the ambient dimension from the variables used.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid pointer.
enum IntersieveStatus intersieve_poly_parse(const char *text,
                                            int32_t num_vars_hint,
                                            struct IntersievePoly **out);

// Frees a polynomial handle.
//
// # Safety
// `p` must come from `intersieve_poly_parse` and not be freed twice.
void intersieve_poly_free(struct IntersievePoly *p);

// Ambient variable count.
//
// # Safety
// `p` must be a live handle.
int32_t intersieve_poly_num_vars(const struct IntersievePoly *p);

// Total degree; -1 for the zero polynomial.
//
// # Safety
// `p` must be a live handle.
int64_t intersieve_poly_degree(const struct IntersievePoly *p);

// Canonical JSON form of the polynomial.
//
// # Safety
// `p` must be a live handle; free the string with `intersieve_string_free`.
enum IntersieveStatus intersieve_poly_to_json(const struct IntersievePoly *p, char **out);

// Exact value at an integer point, as a decimal string.
//
// # Safety
// `point` must reference `len` readable values; other pointers live.
enum IntersieveStatus intersieve_poly_evaluate(const struct IntersievePoly *p,
                                               const int64_t *point,
                                               size_t len,
                                               char **out);

// Deligne certification, rank of the top part, and the intersectivity
// scan, as one JSON object.
//
// # Safety
// `p` must be a live handle; free the string with `intersieve_string_free`.
enum IntersieveStatus intersieve_classify_json(const struct IntersievePoly *p,
                                               uint64_t prime_bound,
                                               uint64_t point_budget,
                                               char **out);

// Complete exponential sum over `F_p^l`. `bound_out` receives NaN when the
// square-root cancellation bound does not apply.
//
// # Safety
// All pointers must be valid; `p` must be a live handle.
enum IntersieveStatus intersieve_complete_sum(const struct IntersievePoly *p,
                                              uint64_t prime,
                                              uint64_t point_budget,
                                              double *re_out,
                                              double *im_out,
                                              double *bound_out);

// Sieve profile (gamma, j, exact weight) as JSON.
//
// # Safety
// `p` must be a live handle; free the string with `intersieve_string_free`.
enum IntersieveStatus intersieve_sieve_profile_json(const struct IntersievePoly *p,
                                                    uint64_t y,
                                                    uint32_t max_gamma,
                                                    uint64_t point_budget,
                                                    char **out);

// Exact D(X, N) with witness, as JSON. `xs` lists the forbidden positive
// differences.
//
// # Safety
// `xs` must reference `n_xs` readable values; `out` must be valid.
enum IntersieveStatus intersieve_diffset_exact_json(const uint64_t *xs,
                                                    size_t n_xs,
                                                    uint64_t n,
                                                    uint64_t node_budget,
                                                    char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* INTERSIEVE_H */
