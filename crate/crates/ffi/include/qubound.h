#ifndef QUBOUND_H
#define QUBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QbBound {
  QB_BOUND_T1A = 0,
  QB_BOUND_T1B = 1,
  QB_BOUND_SEN = 2,
} QbBound;

typedef enum QbBoundStatus {
  QB_BOUND_STATUS_CHECKED = 0,
  QB_BOUND_STATUS_VACUOUS = 1,
  QB_BOUND_STATUS_SKIPPED = 2,
} QbBoundStatus;

typedef enum QbStatus {
  QB_STATUS_OK = 0,
  QB_STATUS_NULL_POINTER = 1,
  QB_STATUS_INVALID_UTF8 = 2,
  QB_STATUS_PARSE = 3,
  QB_STATUS_VALIDATION = 4,
  QB_STATUS_VANISHING_BRANCH = 5,
  QB_STATUS_RESOURCE = 6,
  QB_STATUS_PRECONDITION = 7,
  QB_STATUS_NUMERIC = 8,
  QB_STATUS_BUFFER_TOO_SMALL = 9,
  QB_STATUS_PANIC = 10,
} QbStatus;

/**
 * A classical-quantum channel.
 */
typedef struct QbChannel QbChannel;

/**
 * A state and projector chain.
 */
typedef struct QbInstance QbInstance;

/**
 * The record of one chain run.
 */
typedef struct QbTrace QbTrace;

/**
 * Both sides of one inequality. `margin = lhs - rhs`.
 */
typedef struct QbBoundResult {
  double lhs;
  double rhs;
  double margin;
  double tolerance;
  bool satisfied;
  enum QbBoundStatus status;
} QbBoundResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next `qb_*` call on the same thread.
 */
const char *qb_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qb_version(void);

/**
 * Parses an instance `{"rho": ..., "projectors": [...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QbStatus qb_instance_from_json(const char *json, struct QbInstance **out);

/**
 * # Safety
 * `inst` must come from [`qb_instance_from_json`] and not be used again.
 */
void qb_instance_free(struct QbInstance *inst);

/**
 * Hilbert space dimension and chain length.
 *
 * # Safety
 * `inst` must be a live handle; `dim` and `len` valid pointers.
 */
enum QbStatus qb_instance_shape(const struct QbInstance *inst, size_t *dim, size_t *len);

/**
 * Runs the chain. With `purify` set a mixed initial state is replaced by
 * its purification, which makes the angles available.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum QbStatus qb_run_chain(const struct QbInstance *inst, bool purify, struct QbTrace **out);

/**
 * # Safety
 * `trace` must come from [`qb_run_chain`] and not be used again.
 */
void qb_trace_free(struct QbTrace *trace);

/**
 * Success probability of the all-`P_i` branch and `‖ρ - ρ_N‖_1`.
 *
 * # Safety
 * `trace` must be a live handle; the outputs valid pointers.
 */
enum QbStatus qb_trace_summary(const struct QbTrace *trace,
                               double *success,
                               double *trace_distance,
                               double *epsilon_sum);

/**
 * Copies `ε_1 … ε_N` into `buf`. `needed` receives `N`; when `cap < N`
 * nothing is copied and `QB_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `trace` must be a live handle, `needed` valid, and `buf` valid for `cap`
 * writes (it may be null when `cap` is 0).
 */
enum QbStatus qb_trace_epsilons(const struct QbTrace *trace,
                                double *buf,
                                size_t cap,
                                size_t *needed);

/**
 * Evaluates one of the chain bounds on a trace. `bound` is a [`QbBound`]
 * value; anything else is a validation error.
 *
 * # Safety
 * `trace` must be a live handle and `out` a valid pointer.
 */
enum QbStatus qb_check_bound(const struct QbTrace *trace,
                             uint32_t bound,
                             struct QbBoundResult *out);

/**
 * Operator form `P_1⋯P_N⋯P_1 ⪰ I - 4Σ(I - P_i)` on the instance's projectors.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum QbStatus qb_corollary1(const struct QbInstance *inst, struct QbBoundResult *out);

/**
 * JSON record of a trace: the angle report for pure runs, otherwise the
 * probabilities and distances alone.
 *
 * # Safety
 * `trace` must be a live handle and `out` a valid pointer. Release the
 * string with [`qb_string_free`].
 */
enum QbStatus qb_trace_to_json(const struct QbTrace *trace, char **out);

/**
 * # Safety
 * `s` must come from a `qb_*` function returning an owned string.
 */
void qb_string_free(char *s);

/**
 * Parses a channel `{"prior": [...], "outputs": [...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QbStatus qb_channel_from_json(const char *json, struct QbChannel **out);

/**
 * # Safety
 * `ch` must come from [`qb_channel_from_json`] and not be used again.
 */
void qb_channel_free(struct QbChannel *ch);

/**
 * Holevo quantity `χ` in bits.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum QbStatus qb_channel_holevo(const struct QbChannel *ch, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUBOUND_H */
