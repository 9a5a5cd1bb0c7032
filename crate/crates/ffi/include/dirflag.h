#ifndef DIRFLAG_H
#define DIRFLAG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DirflagPipeline {
  DIRFLAG_PIPELINE_SP_DFL = 0,
  DIRFLAG_PIPELINE_GROUNDED_H1 = 1,
} DirflagPipeline;

// Result of every fallible call.
typedef enum DirflagStatus {
  DIRFLAG_STATUS_OK = 0,
  DIRFLAG_STATUS_NULL_POINTER = 1,
  DIRFLAG_STATUS_INVALID_ARGUMENT = 2,
  DIRFLAG_STATUS_PARSE_ERROR = 3,
  DIRFLAG_STATUS_PANIC = 4,
} DirflagStatus;

typedef enum DirflagSystem {
  DIRFLAG_SYSTEM_A = 0,
  DIRFLAG_SYSTEM_DFL = 1,
} DirflagSystem;

// Outcome of a homotopy search.
typedef enum DirflagVerdict {
  DIRFLAG_VERDICT_FOUND = 0,
  DIRFLAG_VERDICT_ABSENT = 1,
  DIRFLAG_VERDICT_INCONCLUSIVE = 2,
} DirflagVerdict;

// Opaque barcode handle.
typedef struct DirflagBarcode DirflagBarcode;

// Opaque digraph handle.
typedef struct DirflagDigraph DirflagDigraph;

// Opaque weighted digraph handle.
typedef struct DirflagWeightedDigraph DirflagWeightedDigraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *dirflag_last_error(void);

// Build a digraph on `vertex_count` vertices from `edge_count` pairs stored
// flat in `edges` (`src0, dst0, src1, dst1, …`).
//
// # Safety
// `edges` must point to `2 * edge_count` values (it may be null when
// `edge_count` is 0) and `out` must be writable.
enum DirflagStatus dirflag_digraph_new(size_t vertex_count,
                                       const size_t *edges,
                                       size_t edge_count,
                                       struct DirflagDigraph **out);

// Parse a flag file or edge list.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum DirflagStatus dirflag_digraph_parse(const char *text, struct DirflagDigraph **out);

// # Safety
// `g` must be null or a handle from this library not yet freed.
void dirflag_digraph_free(struct DirflagDigraph *g);

// Vertex count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t dirflag_digraph_vertex_count(const struct DirflagDigraph *g);

// Edge count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t dirflag_digraph_edge_count(const struct DirflagDigraph *g);

// Betti numbers of the directed flag complex in degrees `0..=max_dim`,
// over `GF(prime)`, or over the rationals when `prime` is 0.
//
// # Safety
// `g` must be a live handle and `out` must hold `out_len` values.
enum DirflagStatus dirflag_flag_betti(const struct DirflagDigraph *g,
                                      size_t max_dim,
                                      uint64_t prime,
                                      size_t *out,
                                      size_t out_len);

// As [`dirflag_flag_betti`] for the allowed-path complex.
//
// # Safety
// As [`dirflag_flag_betti`].
enum DirflagStatus dirflag_allowed_betti(const struct DirflagDigraph *g,
                                         size_t max_dim,
                                         uint64_t prime,
                                         size_t *out,
                                         size_t out_len);

// Whether there is a one-step homotopy from `f` to `g_map` in the chosen
// system. Both maps list one image per vertex of `g`.
//
// # Safety
// Handles must be live; `f` and `g_map` must hold one value per vertex of
// `g`; `out` must be writable.
enum DirflagStatus dirflag_one_step(enum DirflagSystem system,
                                    const struct DirflagDigraph *g,
                                    const struct DirflagDigraph *h,
                                    const size_t *f,
                                    const size_t *g_map,
                                    bool *out);

// Breadth-first search for a zig-zag from `f` to `g_map`. On `Found`,
// `out_steps` receives the witness length. Running out of budget is not an
// error: the verdict is `Inconclusive`.
//
// # Safety
// As [`dirflag_one_step`]; `out_verdict` and `out_steps` must be writable.
enum DirflagStatus dirflag_homotopy_search(enum DirflagSystem system,
                                           const struct DirflagDigraph *g,
                                           const struct DirflagDigraph *h,
                                           const size_t *f,
                                           const size_t *g_map,
                                           size_t budget,
                                           enum DirflagVerdict *out_verdict,
                                           size_t *out_steps);

// Parse a weighted digraph (flag file or edge list; missing weights are 1).
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum DirflagStatus dirflag_weighted_parse(const char *text, struct DirflagWeightedDigraph **out);

// # Safety
// `g` must be null or a live handle.
void dirflag_weighted_free(struct DirflagWeightedDigraph *g);

// Persistence barcode of a weighted digraph. `max_degree` is ignored by
// the grounded pipeline, which reports degree 1 only.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum DirflagStatus dirflag_barcode_compute(const struct DirflagWeightedDigraph *g,
                                           enum DirflagPipeline pipeline,
                                           size_t max_degree,
                                           uint64_t prime,
                                           struct DirflagBarcode **out);

// # Safety
// `b` must be null or a live handle.
void dirflag_barcode_free(struct DirflagBarcode *b);

// Number of bars, or 0 for a null handle.
//
// # Safety
// `b` must be null or a live handle.
size_t dirflag_barcode_len(const struct DirflagBarcode *b);

// Bar `index` in `(degree, birth, death)` order; an infinite death is
// reported as `INFINITY`. Times are rounded to doubles; use
// [`dirflag_barcode_csv`] for exact values.
//
// # Safety
// `b` must be a live handle and the out pointers writable.
enum DirflagStatus dirflag_barcode_bar(const struct DirflagBarcode *b,
                                       size_t index,
                                       size_t *degree,
                                       double *birth,
                                       double *death);

// Exact CSV text (`degree,birth,death`, `inf` for infinite deaths). Free
// the result with [`dirflag_string_free`].
//
// # Safety
// `b` must be a live handle and `out` writable.
enum DirflagStatus dirflag_barcode_csv(const struct DirflagBarcode *b, char **out);

// Bottleneck distance in one degree; `INFINITY` when the infinite bars
// cannot be matched.
//
// # Safety
// Handles must be live and `out` writable.
enum DirflagStatus dirflag_barcode_bottleneck(const struct DirflagBarcode *a,
                                              const struct DirflagBarcode *b,
                                              size_t degree,
                                              double *out);

// Release a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void dirflag_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRFLAG_H */
