#ifndef LRMC_H
#define LRMC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum LrmcStatus {
  LRMC_STATUS_OK = 0,
  LRMC_STATUS_NULL_POINTER = 1,
  LRMC_STATUS_INVALID_ARGUMENT = 2,
  LRMC_STATUS_PARSE = 3,
  LRMC_STATUS_DEGENERATE = 4,
  LRMC_STATUS_NUMERICAL = 5,
  LRMC_STATUS_RANK_BAND_MISSED = 6,
  LRMC_STATUS_IO = 7,
  LRMC_STATUS_PANIC = 99,
} LrmcStatus;

/**
 * Cell states as reported by [`lrmc_map_get`].
 */
typedef enum LrmcCell {
  LRMC_CELL_FEATURED = 0,
  LRMC_CELL_FREE = 1,
  LRMC_CELL_UNKNOWN = 2,
} LrmcCell;

/**
 * Opaque completion result.
 */
typedef struct LrmcCompletion LrmcCompletion;

/**
 * Opaque feature map.
 */
typedef struct LrmcMap LrmcMap;

/**
 * Solver settings. `lambda_is_fraction` selects whether `lambda` is a
 * fraction of the largest singular value or an absolute weight;
 * `max_rank` 0 means uncapped.
 */
typedef struct LrmcSolverOptions {
  double lambda;
  bool lambda_is_fraction;
  double tolerance;
  size_t max_iterations;
  size_t max_rank;
} LrmcSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *lrmc_last_error_message(void);

/**
 * Parse a map file held in memory.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out` must be writable.
 */
enum LrmcStatus lrmc_map_parse(const uint8_t *bytes, size_t len, struct LrmcMap **out);

/**
 * Generate a maze with the given target rank.
 *
 * # Safety
 * `out` must be writable.
 */
enum LrmcStatus lrmc_map_generate(size_t rows,
                                  size_t cols,
                                  size_t target_rank,
                                  size_t corridor_width,
                                  uint64_t seed,
                                  struct LrmcMap **out);

/**
 * Create a map with every cell set to `fill` (0 featured, 1 free, 2 unknown).
 *
 * # Safety
 * `out` must be writable.
 */
enum LrmcStatus lrmc_map_new(size_t rows,
                             size_t cols,
                             double resolution,
                             int32_t fill,
                             struct LrmcMap **out);

/**
 * Serialize a map; release the buffer with [`lrmc_bytes_free`].
 *
 * # Safety
 * `map` must be a live handle; `out_bytes` and `out_len` must be writable.
 */
enum LrmcStatus lrmc_map_serialize(const struct LrmcMap *map, uint8_t **out_bytes, size_t *out_len);

/**
 * Release a buffer returned by [`lrmc_map_serialize`].
 *
 * # Safety
 * `bytes` and `len` must come from one serialize call; null is ignored.
 */
void lrmc_bytes_free(uint8_t *bytes, size_t len);

/**
 * Number of rows, or 0 for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
size_t lrmc_map_rows(const struct LrmcMap *map);

/**
 * Number of columns, or 0 for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
size_t lrmc_map_cols(const struct LrmcMap *map);

/**
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum LrmcStatus lrmc_map_get(const struct LrmcMap *map, size_t row, size_t col, enum LrmcCell *out);

/**
 * # Safety
 * `map` must be a live handle.
 */
enum LrmcStatus lrmc_map_set(struct LrmcMap *map, size_t row, size_t col, int32_t state);

/**
 * # Safety
 * `map` must be null or a handle not yet freed.
 */
void lrmc_map_free(struct LrmcMap *map);

/**
 * Numeric rank and coherence of the encoded map (unknown cells as 0).
 *
 * # Safety
 * `map` must be a live handle; outputs must be writable.
 */
enum LrmcStatus lrmc_map_structure(const struct LrmcMap *map,
                                   size_t *out_rank,
                                   double *out_coherence);

/**
 * Sample count `ceil(C n^1.2 r log10 n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LrmcStatus lrmc_sample_bound(size_t n, size_t r, double coefficient_c, uint64_t *out);

/**
 * Library defaults for [`lrmc_map_complete`].
 */
struct LrmcSolverOptions lrmc_solver_options_default(void);

/**
 * Complete the unknown cells of `map`. Null `options` uses the defaults.
 *
 * # Safety
 * `map` must be a live handle; `options` null or readable; `out` writable.
 */
enum LrmcStatus lrmc_map_complete(const struct LrmcMap *map,
                                  const struct LrmcSolverOptions *options,
                                  struct LrmcCompletion **out);

/**
 * Completed matrix entry.
 *
 * # Safety
 * `completion` must be a live handle; `out` writable.
 */
enum LrmcStatus lrmc_completion_value(const struct LrmcCompletion *completion,
                                      size_t row,
                                      size_t col,
                                      double *out);

/**
 * # Safety
 * `completion` must be null or a live handle.
 */
size_t lrmc_completion_iterations(const struct LrmcCompletion *completion);

/**
 * # Safety
 * `completion` must be null or a live handle.
 */
bool lrmc_completion_converged(const struct LrmcCompletion *completion);

/**
 * # Safety
 * `completion` must be null or a live handle.
 */
size_t lrmc_completion_rank(const struct LrmcCompletion *completion);

/**
 * Objective value, or NaN for a null handle.
 *
 * # Safety
 * `completion` must be null or a live handle.
 */
double lrmc_completion_objective(const struct LrmcCompletion *completion);

/**
 * Binarize the completion into a new, fully known map.
 *
 * # Safety
 * `completion` must be a live handle; `out` writable.
 */
enum LrmcStatus lrmc_completion_classify(const struct LrmcCompletion *completion,
                                         struct LrmcMap **out);

/**
 * # Safety
 * `completion` must be null or a handle not yet freed.
 */
void lrmc_completion_free(struct LrmcCompletion *completion);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LRMC_H */
