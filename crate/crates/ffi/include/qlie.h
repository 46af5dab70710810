#ifndef QLIE_H
#define QLIE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum QlieStatus {
  QLIE_STATUS_OK = 0,
  /**
   * The call succeeded and the checked identity does not hold.
   */
  QLIE_STATUS_VERIFY_FAILED = 1,
  QLIE_STATUS_INVALID_ARGUMENT = 2,
  QLIE_STATUS_NULL_POINTER = 3,
  /**
   * A bug inside the library; the message has details.
   */
  QLIE_STATUS_INTERNAL = 4,
} QlieStatus;

/**
 * Closed-form matrices that can be constructed directly.
 */
typedef enum QlieMatrix {
  QLIE_MATRIX_SIGMA = 0,
  QLIE_MATRIX_SIGMA_FAMILY = 1,
  QLIE_MATRIX_EXTENDED = 2,
} QlieMatrix;

/**
 * Opaque handle to a sparse operator with exact symbolic entries.
 */
typedef struct QlieOperator QlieOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qlie_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string produced by this library and not yet freed.
 */
void qlie_string_free(char *s);

/**
 * Builds one of the closed-form matrices for `n >= 1` with symbolic β, C, p.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum QlieStatus qlie_operator_new(enum QlieMatrix kind, uint32_t n, struct QlieOperator **out);

/**
 * Parses an operator from its JSON form (`{"n", "legs", "entries"}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum QlieStatus qlie_operator_from_json(const char *json, struct QlieOperator **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `op` must be null or a handle from this library that has not been freed.
 */
void qlie_operator_free(struct QlieOperator *op);

/**
 * Writes n and the number of legs.
 *
 * # Safety
 * `op` must be a live handle; `n` and `legs` must be writable.
 */
enum QlieStatus qlie_operator_shape(const struct QlieOperator *op, uint32_t *n, uint32_t *legs);

/**
 * Number of nonzero entries.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum QlieStatus qlie_operator_nnz(const struct QlieOperator *op, size_t *out);

/**
 * Entry (i, j; k, l) of a two-leg operator as a canonical scalar string.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum QlieStatus qlie_operator_get(const struct QlieOperator *op,
                                  uint32_t i,
                                  uint32_t j,
                                  uint32_t k,
                                  uint32_t l,
                                  char **out);

/**
 * Overwrites entry (i, j; k, l) of a two-leg operator with a parsed scalar
 * such as `"1 - b"` or `"2*C*p^-1"`.
 *
 * # Safety
 * `op` must be a live handle; `value` must be a NUL-terminated string.
 */
enum QlieStatus qlie_operator_set(struct QlieOperator *op,
                                  uint32_t i,
                                  uint32_t j,
                                  uint32_t k,
                                  uint32_t l,
                                  const char *value);

/**
 * New handle with β, C and p substituted where the argument is non-null.
 *
 * # Safety
 * `op` must be a live handle; value pointers must be null or NUL-terminated;
 * `out` must be writable.
 */
enum QlieStatus qlie_operator_specialize(const struct QlieOperator *op,
                                         const char *beta,
                                         const char *c,
                                         const char *p,
                                         struct QlieOperator **out);

/**
 * JSON form of the operator.
 *
 * # Safety
 * `op` must be a live handle; `out` must be writable.
 */
enum QlieStatus qlie_operator_to_json(const struct QlieOperator *op, char **out);

/**
 * JSON form of the structure constants C^k_{ij} for `n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QlieStatus qlie_constants_to_json(uint32_t n, char **out);

/**
 * Checks the braid relation for a two-leg handle and writes the report.
 * Returns `QLIE_STATUS_VERIFY_FAILED` when the relation does not hold.
 *
 * # Safety
 * `op` must be a live handle; value pointers must be null or NUL-terminated;
 * `report` must be writable.
 */
enum QlieStatus qlie_check_braid(const struct QlieOperator *op,
                                 const char *beta,
                                 const char *c,
                                 const char *p,
                                 char **report);

/**
 * Runs a named suite (`braid`, `ybe`, `cybe`, `components`, `ybfr`, `qlie`,
 * `rtt` or `all`) and writes the combined JSON report.
 *
 * # Safety
 * `suite` must be NUL-terminated; value pointers must be null or
 * NUL-terminated; `report` must be writable.
 */
enum QlieStatus qlie_verify(const char *suite,
                            uint32_t n,
                            const char *beta,
                            const char *c,
                            const char *p,
                            uint64_t seed,
                            char **report);

/**
 * Compares the matrix of the functional R̂ with the extended matrix.
 *
 * # Safety
 * `report` must be writable.
 */
enum QlieStatus qlie_cross_check(uint32_t n, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLIE_H */
