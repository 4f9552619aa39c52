#ifndef MATROOT_H
#define MATROOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call. `MATROOT_STATUS_OK` is zero.
 */
typedef enum MatrootStatus {
  MATROOT_STATUS_OK = 0,
  MATROOT_STATUS_NULL_POINTER = 1,
  MATROOT_STATUS_DIMENSION_MISMATCH = 2,
  MATROOT_STATUS_NOT_SQUARE = 3,
  MATROOT_STATUS_EMPTY_BLOCK_LIST = 4,
  MATROOT_STATUS_NON_FINITE = 5,
  MATROOT_STATUS_INVALID_PARAMETER = 6,
  MATROOT_STATUS_SINGULAR = 7,
  MATROOT_STATUS_NOT_SYMMETRIC = 8,
  MATROOT_STATUS_NO_CONVERGENCE = 9,
  MATROOT_STATUS_NOT_ORTHOGONAL = 10,
  MATROOT_STATUS_NOT_INVOLUTORY = 11,
  MATROOT_STATUS_NOT_IDEMPOTENT = 12,
  MATROOT_STATUS_ODD_NEGATIVE_MULTIPLICITY = 13,
  MATROOT_STATUS_CLUSTER_AMBIGUOUS = 14,
  MATROOT_STATUS_SINGULAR_BLOCK = 15,
  MATROOT_STATUS_SINGULAR_SCHUR = 16,
  MATROOT_STATUS_DEGENERATE_PARAMETERS = 17,
  MATROOT_STATUS_CONSISTENCY_CHECK = 18,
  MATROOT_STATUS_PARSE = 19,
  MATROOT_STATUS_PANIC = 20,
} MatrootStatus;

/**
 * Classification of an orthogonal matrix by its canonical blocks.
 */
typedef enum MatrootOrthogonalClass {
  MATROOT_ORTHOGONAL_CLASS_INVOLUTORY_ORTHOGONAL = 0,
  MATROOT_ORTHOGONAL_CLASS_HAS_REAL_ORTHOGONAL_ROOT = 1,
  MATROOT_ORTHOGONAL_CLASS_NO_REAL_ROOT_CONSTRUCTION = 2,
} MatrootOrthogonalClass;

/**
 * Opaque dense real matrix.
 */
typedef struct MatrootMatrix MatrootMatrix;

/**
 * Opaque root tower: the `2^k`-th roots of an orthogonal matrix for
 * `k = 0..=depth`.
 */
typedef struct MatrootTower MatrootTower;

/**
 * Numerical tolerances. Pass NULL wherever a `const MatrootTolerances *`
 * is accepted to use [`matroot_tolerances_default`].
 */
typedef struct MatrootTolerances {
  double eq_rtol;
  double rank_tol;
  double pair_tol;
} MatrootTolerances;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated name of `status`, e.g. `"NotInvolutory"`.
 */
const char *matroot_status_name(enum MatrootStatus status);

/**
 * Message for the last failed call on this thread, or NULL after a
 * successful one. Valid until the next call into this library on the same
 * thread.
 */
const char *matroot_last_error_message(void);

struct MatrootTolerances matroot_tolerances_default(void);

/**
 * Creates a `rows × cols` matrix from `rows * cols` row-major entries.
 *
 * # Safety
 * `data` must point to `rows * cols` readable doubles and `out` must be
 * writable.
 */
enum MatrootStatus matroot_matrix_new(size_t rows,
                                      size_t cols,
                                      const double *data,
                                      struct MatrootMatrix **out);

/**
 * Parses the plain-text matrix format (`rows cols` header, then one line
 * per row).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` must be writable.
 */
enum MatrootStatus matroot_matrix_from_text(const char *text, struct MatrootMatrix **out);

/**
 * # Safety
 * `m` must be NULL or a handle from this library that has not been freed.
 */
void matroot_matrix_free(struct MatrootMatrix *m);

/**
 * Number of rows, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t matroot_matrix_rows(const struct MatrootMatrix *m);

/**
 * Number of columns, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t matroot_matrix_cols(const struct MatrootMatrix *m);

/**
 * Copies the entries, row-major, into `buf` of length `len`, which must be
 * at least `rows * cols`.
 *
 * # Safety
 * `m` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum MatrootStatus matroot_matrix_copy_data(const struct MatrootMatrix *m, double *buf, size_t len);

/**
 * Real square root of an involutory matrix, default choices.
 *
 * # Safety
 * `a` must be a live handle, `tol` NULL or readable, `out` writable.
 */
enum MatrootStatus matroot_involutory_root(const struct MatrootMatrix *a,
                                           const struct MatrootTolerances *tol,
                                           struct MatrootMatrix **out);

/**
 * Real square root of a symmetric matrix, default choices.
 *
 * # Safety
 * As [`matroot_involutory_root`].
 */
enum MatrootStatus matroot_symmetric_root(const struct MatrootMatrix *s,
                                          const struct MatrootTolerances *tol,
                                          struct MatrootMatrix **out);

/**
 * Orthogonal square root of an orthogonal matrix.
 *
 * # Safety
 * As [`matroot_involutory_root`].
 */
enum MatrootStatus matroot_orthogonal_root(const struct MatrootMatrix *q,
                                           const struct MatrootTolerances *tol,
                                           struct MatrootMatrix **out);

/**
 * Writes the class of `q` to `class_out` and whether an orthogonal root
 * exists to `root_eligible_out`.
 *
 * # Safety
 * `q` must be a live handle, `tol` NULL or readable, both outputs writable.
 */
enum MatrootStatus matroot_classify_orthogonal(const struct MatrootMatrix *q,
                                               const struct MatrootTolerances *tol,
                                               enum MatrootOrthogonalClass *class_out,
                                               bool *root_eligible_out);

/**
 * Builds the tower of `2^k`-th roots of `q` for `k = 0..=depth`,
 * `1 <= depth <= 40`.
 *
 * # Safety
 * `q` must be a live handle, `tol` NULL or readable, `out` writable.
 */
enum MatrootStatus matroot_tower_new(const struct MatrootMatrix *q,
                                     uint32_t depth,
                                     const struct MatrootTolerances *tol,
                                     struct MatrootTower **out);

/**
 * Depth of the tower, or 0 for NULL.
 *
 * # Safety
 * `t` must be NULL or a live tower handle.
 */
uint32_t matroot_tower_depth(const struct MatrootTower *t);

/**
 * The `2^k`-th root at level `k`, `0 <= k <= depth`.
 *
 * # Safety
 * `t` must be a live tower handle and `out` writable.
 */
enum MatrootStatus matroot_tower_level_root(const struct MatrootTower *t,
                                            uint32_t k,
                                            struct MatrootMatrix **out);

/**
 * # Safety
 * `t` must be NULL or a tower handle that has not been freed.
 */
void matroot_tower_free(struct MatrootTower *t);

/**
 * Idempotent `M·(I ⊕ 0)·M⁻¹` for `M = [[a, b], [c, d]]`.
 *
 * # Safety
 * All four blocks must be live handles, `tol` NULL or readable, `out`
 * writable.
 */
enum MatrootStatus matroot_block_idempotent(const struct MatrootMatrix *a,
                                            const struct MatrootMatrix *b,
                                            const struct MatrootMatrix *c,
                                            const struct MatrootMatrix *d,
                                            const struct MatrootTolerances *tol,
                                            struct MatrootMatrix **out);

/**
 * `2p − I` for idempotent `p`.
 *
 * # Safety
 * As [`matroot_involutory_root`].
 */
enum MatrootStatus matroot_involutory_from_idempotent(const struct MatrootMatrix *p,
                                                      const struct MatrootTolerances *tol,
                                                      struct MatrootMatrix **out);

/**
 * Determinant by LU; 0 when the matrix is singular by `rank_tol`.
 *
 * # Safety
 * `a` must be a live handle, `tol` NULL or readable, `out` writable.
 */
enum MatrootStatus matroot_det(const struct MatrootMatrix *a,
                               const struct MatrootTolerances *tol,
                               double *out);

/**
 * # Safety
 * `a` must be a live handle, `tol` NULL or readable, `out` writable.
 */
enum MatrootStatus matroot_is_involutory(const struct MatrootMatrix *a,
                                         const struct MatrootTolerances *tol,
                                         bool *out);

/**
 * # Safety
 * As [`matroot_is_involutory`].
 */
enum MatrootStatus matroot_is_idempotent(const struct MatrootMatrix *a,
                                         const struct MatrootTolerances *tol,
                                         bool *out);

/**
 * # Safety
 * As [`matroot_is_involutory`].
 */
enum MatrootStatus matroot_is_orthogonal(const struct MatrootMatrix *a,
                                         const struct MatrootTolerances *tol,
                                         bool *out);

/**
 * Largest supported tower depth.
 */
uint32_t matroot_max_tower_depth(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATROOT_H */
