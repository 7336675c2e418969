#ifndef SRGSUB_H
#define SRGSUB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum SrgStatus {
  SRG_STATUS_OK = 0,
  SRG_STATUS_NULL_POINTER = 1,
  SRG_STATUS_INVALID_ARGUMENT = 2,
  SRG_STATUS_PARSE = 3,
  SRG_STATUS_NOT_IN_FAMILY = 4,
  SRG_STATUS_BUDGET_EXCEEDED = 5,
  SRG_STATUS_BUFFER_TOO_SMALL = 6,
  SRG_STATUS_INTERNAL = 7,
} SrgStatus;

/*
 Census algorithm.
 */
typedef enum SrgMethod {
  SRG_METHOD_BRUTE = 0,
  SRG_METHOD_FAST = 1,
} SrgMethod;

/*
 Opaque graph handle.
 */
typedef struct SrgGraph SrgGraph;

/*
 Parameters of a strongly regular graph.
 */
typedef struct SrgParamsC {
  size_t n;
  size_t k;
  size_t lambda;
  size_t mu;
} SrgParamsC;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL.

 The pointer stays valid until the next call into the library on this thread.
 */
const char *srg_last_error_message(void);

/*
 Parses one graph in graph6 format.

 # Safety
 `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SrgStatus srg_graph_from_graph6(const char *text, struct SrgGraph **out);

/*
 Builds the 3x3 rook's graph, srg(9,4,1,2).

 # Safety
 `out` must be a writable pointer.
 */
enum SrgStatus srg_graph_rook9(struct SrgGraph **out);

/*
 Builds the ternary Golay coset graph, srg(243,22,1,2).

 # Safety
 `out` must be a writable pointer.
 */
enum SrgStatus srg_graph_bvls243(struct SrgGraph **out);

/*
 Releases a graph. NULL is ignored.

 # Safety
 `graph` must come from this library and not have been freed.
 */
void srg_graph_free(struct SrgGraph *graph);

/*
 Number of vertices, or 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
size_t srg_graph_order(const struct SrgGraph *graph);

/*
 Encodes a graph as a graph6 string, to be freed with [`srg_string_free`].

 # Safety
 `graph` must be a live handle and `out` a writable pointer.
 */
enum SrgStatus srg_graph_to_graph6(const struct SrgGraph *graph, char **out);

/*
 Writes the strongly regular parameters of `graph`.

 Returns `NotInFamily` when the graph is not strongly regular.

 # Safety
 `graph` must be a live handle and `out` a writable pointer.
 */
enum SrgStatus srg_graph_is_srg(const struct SrgGraph *graph, struct SrgParamsC *out);

/*
 Number of isomorphism classes of order `order` (1..=6), in total and
 feasible in srg(n,k,1,2).

 # Safety
 `total` and `feasible` must be writable pointers.
 */
enum SrgStatus srg_catalog_size(size_t order, size_t *total, size_t *feasible);

/*
 Counts induced subgraphs of order `order` by isomorphism class.

 `counts` receives one entry per class in catalog order; `written` receives
 the number of classes, also when the buffer is too small. `threads` = 0
 uses the default pool. `long_budget` raises the brute-force budget.

 # Safety
 `graph` must be a live handle, `counts` must hold `len` entries and
 `written` must be writable.
 */
enum SrgStatus srg_census(const struct SrgGraph *graph,
                          size_t order,
                          enum SrgMethod method,
                          size_t threads,
                          bool long_budget,
                          uint64_t *counts,
                          size_t len,
                          size_t *written);

/*
 Runs the full verification and returns the JSON report.

 `passed` receives whether the report lists no discrepancies. The report is
 freed with [`srg_string_free`].

 # Safety
 `graph` must be a live handle, `host` NULL or a NUL-terminated string, and
 `report` and `passed` writable pointers.
 */
enum SrgStatus srg_verify_json(const struct SrgGraph *graph,
                               const char *host,
                               size_t threads,
                               char **report,
                               bool *passed);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void srg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SRGSUB_H */
