#ifndef SRKBENCH_H
#define SRKBENCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrkStatus {
  SRK_STATUS_OK = 0,
  SRK_STATUS_NULL_POINTER = 1,
  SRK_STATUS_INVALID_ARGUMENT = 2,
  SRK_STATUS_BUDGET_EXCEEDED = 3,
  SRK_STATUS_PRECONDITION = 4,
  SRK_STATUS_BUFFER_TOO_SMALL = 5,
  SRK_STATUS_MISSING_ENTRY = 6,
  SRK_STATUS_INTERNAL = 7,
  SRK_STATUS_PANIC = 8,
} SrkStatus;

/**
 * Opaque sum-rank space.
 */
typedef struct SrkSpace SrkSpace;

/**
 * Resource limits; see [`srk_default_budgets`].
 */
typedef struct SrkBudgets {
  uint64_t max_vertices;
  uint64_t max_ball;
  uint64_t max_nodes;
} SrkBudgets;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct SrkBudgets srk_default_budgets(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *srk_last_error(void);

/**
 * Creates the space over GF(`q`) with `t` blocks of shape `n[i] × m[i]`.
 *
 * # Safety
 * `n` and `m` must point to `t` readable values; `out` must be writable.
 */
enum SrkStatus srk_space_new(uint32_t q,
                             const size_t *n,
                             const size_t *m,
                             size_t t,
                             struct SrkSpace **out);

/**
 * Releases a space; null is ignored.
 *
 * # Safety
 * `space` must come from [`srk_space_new`] and not be used afterwards.
 */
void srk_space_free(struct SrkSpace *space);

/**
 * Number of elements of the space, as a decimal string.
 *
 * # Safety
 * `space` must be a live handle; `buf` must hold `len` bytes.
 */
enum SrkStatus srk_space_size(const struct SrkSpace *space, char *buf, size_t len, size_t *needed);

/**
 * Ball volume `V(k)` as a decimal string.
 *
 * # Safety
 * As for [`srk_space_size`].
 */
enum SrkStatus srk_ball_volume(const struct SrkSpace *space,
                               size_t k,
                               char *buf,
                               size_t len,
                               size_t *needed);

/**
 * GV lower bound `⌈|V| / V(d − 1)⌉` as a decimal string.
 *
 * # Safety
 * As for [`srk_space_size`].
 */
enum SrkStatus srk_gv_lower(const struct SrkSpace *space,
                            size_t d,
                            char *buf,
                            size_t len,
                            size_t *needed);

/**
 * Statistics of the `k`-th power graph as a JSON object with fields
 * `num_vertices`, `D`, `T`, `Delta` (decimal strings) and `eps_star`.
 * `budgets` may be null for the defaults.
 *
 * # Safety
 * As for [`srk_space_size`]; `budgets` is null or readable.
 */
enum SrkStatus srk_graph_stats_json(const struct SrkSpace *space,
                                    size_t k,
                                    const struct SrkBudgets *budgets,
                                    char *buf,
                                    size_t len,
                                    size_t *needed);

/**
 * Exact independence number of the `k`-th power graph, i.e. the largest
 * code with minimum distance `k + 1`.
 *
 * # Safety
 * `space` must be a live handle, `out` writable, `budgets` null or readable.
 */
enum SrkStatus srk_alpha(const struct SrkSpace *space,
                         size_t k,
                         const struct SrkBudgets *budgets,
                         uint64_t *out);

/**
 * Runs a named verification suite; `*passed` is 1 when every check passed.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `passed` writable.
 */
enum SrkStatus srk_verify(const char *name, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SRKBENCH_H */
