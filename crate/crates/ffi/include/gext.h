#ifndef GEXT_H
#define GEXT_H

/* generated by cbindgen from gext-ffi; do not edit by hand */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum GextStatus {
  GEXT_STATUS_OK = 0,
  GEXT_STATUS_INVALID_ARGUMENT = 1,
  GEXT_STATUS_PARSE_ERROR = 2,
  GEXT_STATUS_BUDGET_EXCEEDED = 3,
  GEXT_STATUS_MATH_ERROR = 4,
  GEXT_STATUS_PANIC = 5,
} GextStatus;

// Opaque context: budget configuration and the last error message.
typedef struct GextContext GextContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a context. `budget` caps Groebner reduction steps per call,
// `cap` bounds nilpotency iteration. Free with `gext_context_free`.
struct GextContext *gext_context_new(uint64_t budget, uint32_t cap);

// Releases a context created by `gext_context_new`.
//
// # Safety
// `ctx` must be a pointer returned by `gext_context_new`, not yet freed.
void gext_context_free(struct GextContext *ctx);

// The last error message recorded on this context. The pointer stays valid
// until the next failing call on the same context.
//
// # Safety
// `ctx` must be a live context pointer.
const char *gext_last_error(const struct GextContext *ctx);

// Releases a string allocated by this library.
//
// # Safety
// `s` must be a pointer previously handed out by a `gext_*` call, not yet
// freed, or null.
void gext_string_free(char *s);

// Runs one case file (JSON, schema 1) and returns the report as JSON.
//
// # Safety
// `ctx` must be live, `case_json` a NUL-terminated UTF-8 string, and
// `report_json` a valid output slot. The returned string is released with
// `gext_string_free`.
enum GextStatus gext_run_case_json(struct GextContext *ctx,
                                   const char *case_json,
                                   char **report_json);

// Runs the whole built-in corpus; returns a JSON array of reports.
//
// # Safety
// As for `gext_run_case_json`.
enum GextStatus gext_run_corpus_json(struct GextContext *ctx, char **reports_json);

// Number of built-in corpus cases.
size_t gext_corpus_len(void);

// Serializes the corpus case at `index` as JSON.
//
// # Safety
// As for `gext_run_case_json`.
enum GextStatus gext_corpus_case(struct GextContext *ctx, size_t index, char **case_json);

// Classifies the cocycle x^-m y^-n p(x, y); returns the minimal level,
// surviving monomials, the gluing datum, and the restriction class as JSON.
//
// # Safety
// As for `gext_run_case_json`; `p` is a NUL-terminated polynomial in x, y.
enum GextStatus gext_cech_classify(struct GextContext *ctx,
                                   int64_t m,
                                   int64_t n,
                                   const char *p,
                                   char **result_json);

// Builds a tower from JSON steps and reports curves, adjacency, dual graph
// and multiplicities.
//
// # Safety
// As for `gext_run_case_json`.
enum GextStatus gext_tower_report(struct GextContext *ctx,
                                  const char *tower_json,
                                  char **result_json);

// Synthesizes an extension from a cocycle (polynomial text) and a tower
// (JSON steps), certifies it, and returns the report as JSON.
//
// # Safety
// As for `gext_run_case_json`.
enum GextStatus gext_synthesize(struct GextContext *ctx,
                                const char *cocycle,
                                const char *tower_json,
                                char **report_json);

// Iteration cap configured on the context (exposed for bindings that want
// to surface it).
//
// # Safety
// `ctx` must be a live context pointer.
uint32_t gext_context_cap(const struct GextContext *ctx);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEXT_H */
