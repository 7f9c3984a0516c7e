/* C interface for the deformative Schrödinger–Virasoro engine. */

#ifndef DSV_H
#define DSV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
#define DSV_OK 0

// A required pointer argument was null.
#define DSV_ERR_NULL 1

// An argument failed to parse (rational literal, shift, or mode).
#define DSV_ERR_PARSE 2

// The parameters are outside the requested map's coset.
#define DSV_ERR_INCOMPATIBLE 3

// The computation ran but a verification check did not pass; the JSON
// report is still produced.
#define DSV_ERR_FAILED 4

// Internal error (modular mismatch, allocation failure, panic).
#define DSV_ERR_INTERNAL 5

// Opaque parameter handle; create with `dsv_params_new`, release with
// `dsv_params_free`.
typedef struct DsvParams DsvParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses the three parameters (rational literals; `s` must be "0" or
// "1/2") into a new handle stored in `*out`.
//
// # Safety
// String arguments must be valid NUL-terminated C strings; `out` must
// be a valid pointer.
int dsv_params_new(const char *lambda,
                   const char *mu,
                   const char *s,
                   struct DsvParams **out);

// Releases a handle created by `dsv_params_new`. Null is a no-op.
//
// # Safety
// `p` must be null or a pointer previously returned by
// `dsv_params_new` that has not been freed.
void dsv_params_free(struct DsvParams *p);

// Releases a string returned by any report function. Null is a no-op.
//
// # Safety
// `s` must be null or a string previously returned by a report
// function that has not been freed.
void dsv_string_free(char *s);

// Writes the case-split report for the handle's parameters.
//
// # Safety
// `p` and `out` must be valid pointers as documented on
// `dsv_params_new` and `dsv_string_free`.
int dsv_case_json(const struct DsvParams *p,
                  char **out);

// Checks the Jacobi identity on the window of the given radius.
//
// # Safety
// As for `dsv_case_json`.
int dsv_jacobi_json(const struct DsvParams *p,
                    int64_t window,
                    char **out);

// Center / derived / abelianization / centralizer report on the window.
//
// # Safety
// As for `dsv_case_json`.
int dsv_structure_json(const struct DsvParams *p,
                       int64_t window,
                       int64_t margin,
                       char **out);

// Residual verification of the exceptional maps defined at the
// parameters; `DSV_ERR_INCOMPATIBLE` when none is.
//
// # Safety
// As for `dsv_case_json`.
int dsv_verify_maps_json(const struct DsvParams *p,
                         int64_t window,
                         char **out);

// Classifies skew-symmetric biderivations; `mode` is 0 for full, 1 for
// graded.
//
// # Safety
// As for `dsv_case_json`.
int dsv_classify_bider_json(const struct DsvParams *p,
                            int64_t window,
                            int mode,
                            uint64_t seed,
                            char **out);

// Classifies linear commuting maps; `mode` is 0 for full, 1 for graded.
//
// # Safety
// As for `dsv_case_json`.
int dsv_classify_commuting_json(const struct DsvParams *p,
                                int64_t window,
                                int mode,
                                uint64_t seed,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DSV_H */
