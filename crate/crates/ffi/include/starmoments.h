#ifndef STARMOMENTS_H
#define STARMOMENTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Random digraph model.
typedef enum SmModel {
  // Configuration model, loops and parallel arcs allowed.
  SM_MODEL_CONFIGURATION_MODEL = 0,
  // Uniform simple regular digraph.
  SM_MODEL_UNIFORM = 1,
} SmModel;

// Result code of every fallible call.
typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_INVALID_UTF8 = 2,
  SM_STATUS_PARSE_ERROR = 3,
  SM_STATUS_INVALID_ARGUMENT = 4,
  SM_STATUS_CAP_EXCEEDED = 5,
  SM_STATUS_OVERFLOW = 6,
  SM_STATUS_IO = 7,
  SM_STATUS_GRAPH_FORMAT = 8,
  SM_STATUS_SAMPLING_FAILED = 9,
  SM_STATUS_PANIC = 10,
} SmStatus;

// Opaque directed multigraph.
typedef struct SmGraph SmGraph;

// Opaque word over the alphabet `{1, *}`.
typedef struct SmWord SmWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *sm_last_error_message(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and must not be freed twice.
void sm_string_free(char *s);

// Library version as a static string.
const char *sm_version(void);

// Parse a word such as `"1**1"` (`s` is accepted for `*`).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum SmStatus sm_word_parse(const char *text, struct SmWord **out);

// Release a word. Null is ignored.
//
// # Safety
// `word` must come from [`sm_word_parse`] and must not be freed twice.
void sm_word_free(struct SmWord *word);

// Length of a word, 0 for null.
//
// # Safety
// `word` must be null or a live handle.
size_t sm_word_len(const struct SmWord *word);

// Whether the word has as many `1` as `*` letters.
//
// # Safety
// `word` must be null or a live handle.
bool sm_word_is_balanced(const struct SmWord *word);

// Star moment of `word` at degree `d` as a decimal string.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer. Free the result
// with [`sm_string_free`].
enum SmStatus sm_star_moment(const struct SmWord *word, size_t d, char **out);

// Star moment of `word` at degree `d`; `SM_STATUS_OVERFLOW` if it exceeds 64 bits.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer.
enum SmStatus sm_star_moment_u64(const struct SmWord *word, size_t d, uint64_t *out);

// Number of closed paths for `word` in the free group on `d` generators,
// counted by direct enumeration.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer.
enum SmStatus sm_count_paths(const struct SmWord *word, size_t d, uint64_t *out);

// Build a graph on `n` vertices from `len` arcs `tails[i] -> heads[i]` (0-based).
//
// # Safety
// `tails` and `heads` must point to `len` elements (or be null when `len`
// is 0) and `out` must be a valid pointer.
enum SmStatus sm_graph_from_arcs(size_t n,
                                 const size_t *tails,
                                 const size_t *heads,
                                 size_t len,
                                 struct SmGraph **out);

// Read a graph file. The declared degree is written to `degree` if non-null.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum SmStatus sm_graph_read(const char *path, struct SmGraph **out, size_t *degree);

// Write a graph file with header degree `d`.
//
// # Safety
// `graph` must be a live handle and `path` a NUL-terminated string.
enum SmStatus sm_graph_write(const struct SmGraph *graph, const char *path, size_t d);

// Sample a `d`-regular digraph on `n` vertices.
//
// `max_attempts` bounds the rejection loop of the uniform model; 0 selects
// the default.
//
// # Safety
// `out` must be a valid pointer.
enum SmStatus sm_graph_sample(size_t n,
                              size_t d,
                              uint64_t seed,
                              enum SmModel model,
                              size_t max_attempts,
                              struct SmGraph **out);

// Release a graph. Null is ignored.
//
// # Safety
// `graph` must come from this library and must not be freed twice.
void sm_graph_free(struct SmGraph *graph);

// Number of vertices, 0 for null.
//
// # Safety
// `graph` must be null or a live handle.
size_t sm_graph_vertex_count(const struct SmGraph *graph);

// Number of arcs, 0 for null.
//
// # Safety
// `graph` must be null or a live handle.
size_t sm_graph_arc_count(const struct SmGraph *graph);

// `Tr(A^w)`, the number of closed walks following `word`.
//
// # Safety
// `graph` and `word` must be live handles and `out` a valid pointer.
enum SmStatus sm_graph_trace(const struct SmGraph *graph, const struct SmWord *word, uint64_t *out);

// Number of plain cycles of length `j`.
//
// # Safety
// `graph` must be a live handle and `out` a valid pointer.
enum SmStatus sm_graph_cycle_count(const struct SmGraph *graph, size_t j, uint64_t *out);

// Number of violations found by the local tree check of radius `k`.
//
// # Safety
// `graph` must be a live handle and `out` a valid pointer.
enum SmStatus sm_graph_tree_violations(const struct SmGraph *graph,
                                       size_t d,
                                       size_t k,
                                       size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARMOMENTS_H */
