#ifndef SUMSETLAB_H
#define SUMSETLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SumsetlabStatus {
  SUMSETLAB_STATUS_OK = 0,
  SUMSETLAB_STATUS_NULL_ARGUMENT = 1,
  SUMSETLAB_STATUS_INVALID_UTF8 = 2,
  SUMSETLAB_STATUS_PARSE = 3,
  SUMSETLAB_STATUS_INVALID_ARGUMENT = 4,
  SUMSETLAB_STATUS_PRECONDITION = 5,
  SUMSETLAB_STATUS_SIZE_LIMIT = 6,
  SUMSETLAB_STATUS_OVERFLOW = 7,
  SUMSETLAB_STATUS_IO = 8,
  SUMSETLAB_STATUS_PANIC = 9,
} SumsetlabStatus;

/**
 * Opaque finitely supported function with exact non-negative weights.
 */
typedef struct SumsetlabFunction SumsetlabFunction;

/**
 * Opaque finite subset of a group.
 */
typedef struct SumsetlabPointSet SumsetlabPointSet;

/**
 * Opaque estimate with its witness and configuration.
 */
typedef struct SumsetlabReport SumsetlabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sumsetlab_version(void);

/**
 * Message of the last failed call on this thread, or "" after a success.
 * Valid until the next call on this thread.
 */
const char *sumsetlab_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, released once.
 */
void sumsetlab_string_free(char *s);

/**
 * Parses a point set in the text format (`group <rank> [mod ...]` header,
 * one point per line).
 *
 * # Safety
 * `text_in` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SumsetlabStatus sumsetlab_point_set_parse(const char *text_in, struct SumsetlabPointSet **out);

/**
 * Builds a subset of Z from `len` integers.
 *
 * # Safety
 * `values` must point to `len` readable integers (or be null with `len == 0`).
 */
enum SumsetlabStatus sumsetlab_point_set_from_ints(const int64_t *values,
                                                   size_t len,
                                                   struct SumsetlabPointSet **out);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t sumsetlab_point_set_len(const struct SumsetlabPointSet *set);

/**
 * Formats a set in the text format. Free the result with `sumsetlab_string_free`.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
enum SumsetlabStatus sumsetlab_point_set_format(const struct SumsetlabPointSet *set, char **out);

/**
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum SumsetlabStatus sumsetlab_sumset(const struct SumsetlabPointSet *a,
                                      const struct SumsetlabPointSet *b,
                                      struct SumsetlabPointSet **out);

/**
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void sumsetlab_point_set_free(struct SumsetlabPointSet *set);

/**
 * Parses a function in the text format (`group` header, then one point
 * followed by its weight per line).
 *
 * # Safety
 * `text_in` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SumsetlabStatus sumsetlab_function_parse(const char *text_in, struct SumsetlabFunction **out);

/**
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void sumsetlab_function_free(struct SumsetlabFunction *f);

/**
 * Estimates beta of `set`. `config_json` may be null for defaults; otherwise
 * a JSON object with any of `p`, `variant`, `strategy`, `box`, `max_card`,
 * `seed`, `threads`, `budget_ms`, `node_ceiling`, `restarts`.
 *
 * # Safety
 * `set` must be a live handle, `config_json` null or NUL-terminated, `out` valid.
 */
enum SumsetlabStatus sumsetlab_estimate_beta(const struct SumsetlabPointSet *set,
                                             const char *config_json,
                                             struct SumsetlabReport **out);

/**
 * Estimates alpha of `set`; configuration as for `sumsetlab_estimate_beta`.
 *
 * # Safety
 * As for `sumsetlab_estimate_beta`.
 */
enum SumsetlabStatus sumsetlab_estimate_alpha(const struct SumsetlabPointSet *set,
                                              const char *config_json,
                                              struct SumsetlabReport **out);

/**
 * Estimates gamma of `f`; configuration as for `sumsetlab_estimate_beta`.
 *
 * # Safety
 * `f` must be a live handle, `config_json` null or NUL-terminated, `out` valid.
 */
enum SumsetlabStatus sumsetlab_estimate_gamma(const struct SumsetlabFunction *f,
                                              const char *config_json,
                                              struct SumsetlabReport **out);

/**
 * Floating-point value of the estimate, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double sumsetlab_report_value(const struct SumsetlabReport *report);

/**
 * Whether the exhaustive window was fully scanned; false for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool sumsetlab_report_complete(const struct SumsetlabReport *report);

/**
 * Full report as JSON. Free the result with `sumsetlab_string_free`.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum SumsetlabStatus sumsetlab_report_json(const struct SumsetlabReport *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void sumsetlab_report_free(struct SumsetlabReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMSETLAB_H */
