#ifndef FASTGH_H
#define FASTGH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum FastghStatus {
  FASTGH_STATUS_OK = 0,
  FASTGH_STATUS_NULL_POINTER = 1,
  FASTGH_STATUS_INVALID_ARGUMENT = 2,
  FASTGH_STATUS_CONVERGENCE = 3,
  FASTGH_STATUS_REGIME = 4,
  FASTGH_STATUS_BUFFER_TOO_SMALL = 5,
  FASTGH_STATUS_INTERNAL = 6,
} FastghStatus;

/**
 * Opaque barycentric interpolant.
 */
typedef struct FastghInterp FastghInterp;

/**
 * Opaque quadrature rule.
 */
typedef struct FastghRule FastghRule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *fastgh_last_error(void);

/**
 * Gauss-Hermite rule with `n` nodes.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum FastghStatus fastgh_hermite_rule(uintptr_t n, bool subsample, struct FastghRule **out);

/**
 * Gauss rule for `e^{-V(x)}`, `V` given by `len` monomial coefficients,
 * constant first, monic of even degree.
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles and `out` to writable
 * storage for one handle.
 */
enum FastghStatus fastgh_freud_rule(const double *coeffs,
                                    uintptr_t len,
                                    uintptr_t n,
                                    bool subsample,
                                    struct FastghRule **out);

/**
 * Number of stored nodes (0 for a null handle).
 *
 * # Safety
 * `rule` must be null or a live handle.
 */
uintptr_t fastgh_rule_len(const struct FastghRule *rule);

/**
 * Size of the full rule, counting skipped nodes.
 *
 * # Safety
 * `rule` must be null or a live handle.
 */
uintptr_t fastgh_rule_size(const struct FastghRule *rule);

/**
 * Nodes omitted on each side by subsampling.
 *
 * # Safety
 * `rule` must be null or a live handle.
 */
uintptr_t fastgh_rule_trivial_skipped(const struct FastghRule *rule);

/**
 * Copies nodes and weights into caller buffers of capacity `cap`. Either
 * buffer may be null to skip it.
 *
 * # Safety
 * `rule` must be a live handle; non-null buffers must hold `cap` doubles.
 */
enum FastghStatus fastgh_rule_copy(const struct FastghRule *rule,
                                   double *nodes,
                                   double *weights,
                                   uintptr_t cap);

/**
 * Releases a rule. Null is ignored.
 *
 * # Safety
 * `rule` must be null or a handle not yet freed.
 */
void fastgh_rule_free(struct FastghRule *rule);

/**
 * Interpolant through `(nodes[k], samples[k])`, ascending nodes, damped by
 * `e^{-V/2}` in weighted evaluation with `V` given as in
 * [`fastgh_freud_rule`] (already normalized: `V(0) = V'(0) = 0`).
 *
 * # Safety
 * `nodes` and `samples` must hold `len` doubles, `coeffs` `coeffs_len`
 * doubles, and `out` must be writable.
 */
enum FastghStatus fastgh_interp_new(const double *nodes,
                                    const double *samples,
                                    uintptr_t len,
                                    const double *coeffs,
                                    uintptr_t coeffs_len,
                                    struct FastghInterp **out);

/**
 * Evaluates the interpolant at `x`, times `e^{-V(x)/2}` when `weighted`.
 *
 * # Safety
 * `interp` must be a live handle and `value` writable.
 */
enum FastghStatus fastgh_interp_eval(const struct FastghInterp *interp,
                                     double x,
                                     bool weighted,
                                     double *value);

/**
 * Releases an interpolant. Null is ignored.
 *
 * # Safety
 * `interp` must be null or a handle not yet freed.
 */
void fastgh_interp_free(struct FastghInterp *interp);

/**
 * `Ai(x)` and `Ai'(x)`; either output may be null.
 *
 * # Safety
 * Non-null outputs must be writable.
 */
enum FastghStatus fastgh_airy(double x, double *ai, double *aip);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FASTGH_H */
