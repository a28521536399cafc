#ifndef ECHELON_H
#define ECHELON_H

#include <stddef.h>
#include <stdint.h>

typedef enum EchStatus {
  ECH_STATUS_OK = 0,
  ECH_STATUS_NULL_POINTER = 1,
  ECH_STATUS_INVALID_ARGUMENT = 2,
  ECH_STATUS_PARSE_ERROR = 3,
  ECH_STATUS_OUT_OF_RANGE = 4,
  ECH_STATUS_DIMENSION_MISMATCH = 5,
  /**
   * A precondition of the operation does not hold (dependent rows or
   * columns, wrong count, singular block).
   */
  ECH_STATUS_PRECONDITION = 6,
  /**
   * The requested data was not computed, e.g. `E` without tracking.
   */
  ECH_STATUS_NOT_AVAILABLE = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  ECH_STATUS_INTERNAL = 8,
} EchStatus;

/**
 * Which matrix of an echelon form to copy out.
 */
typedef enum EchEchelonPart {
  ECH_ECHELON_PART_Z = 0,
  ECH_ECHELON_PART_F = 1,
  /**
   * The column permutation as a 0/1 matrix.
   */
  ECH_ECHELON_PART_P = 2,
  ECH_ECHELON_PART_E = 3,
} EchEchelonPart;

typedef enum EchSolveStatus {
  ECH_SOLVE_STATUS_UNIQUE = 0,
  ECH_SOLVE_STATUS_INFINITE = 1,
  ECH_SOLVE_STATUS_INCONSISTENT = 2,
} EchSolveStatus;

/**
 * Opaque reduced echelon form of a matrix.
 */
typedef struct EchEchelon EchEchelon;

/**
 * Opaque rational matrix.
 */
typedef struct EchMatrix EchMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a
 * success. Valid until the next call into the library on this thread.
 */
const char *ech_last_error(void);

void ech_string_free(char *s);

/**
 * Creates a `rows x cols` zero matrix.
 */
enum EchStatus ech_matrix_new(size_t rows, size_t cols, struct EchMatrix **result);

/**
 * Parses rational CSV or Matrix Market text (detected automatically).
 */
enum EchStatus ech_matrix_parse(const char *text, struct EchMatrix **result);

void ech_matrix_free(struct EchMatrix *m);

enum EchStatus ech_matrix_shape(const struct EchMatrix *m, size_t *rows, size_t *cols);

/**
 * Sets entry `(i, j)` from a literal such as `-3`, `7/2` or `0.25`.
 */
enum EchStatus ech_matrix_set(struct EchMatrix *m, size_t i, size_t j, const char *value);

/**
 * Sets entry `(i, j)` to `numer / denom`.
 */
enum EchStatus ech_matrix_set_ratio(struct EchMatrix *m,
                                    size_t i,
                                    size_t j,
                                    int64_t numer,
                                    int64_t denom);

/**
 * Entry `(i, j)` as `p` or `p/q`.
 */
enum EchStatus ech_matrix_get(const struct EchMatrix *m, size_t i, size_t j, char **result);

/**
 * Whole matrix as rational CSV.
 */
enum EchStatus ech_matrix_to_csv(const struct EchMatrix *m, char **result);

enum EchStatus ech_matrix_equal(const struct EchMatrix *a, const struct EchMatrix *b, int *result);

/**
 * `a * b` into a new matrix.
 */
enum EchStatus ech_matrix_mul(const struct EchMatrix *a,
                              const struct EchMatrix *b,
                              struct EchMatrix **result);

/**
 * Reduced row echelon form. With `track_e` nonzero, `E` with `E A = Z` is
 * also kept. `pivot_rule` is 0 for first nonzero, 1 for largest magnitude.
 */
enum EchStatus ech_rref(const struct EchMatrix *a,
                        int pivot_rule,
                        int track_e,
                        struct EchEchelon **result);

void ech_echelon_free(struct EchEchelon *e);

enum EchStatus ech_echelon_rank(const struct EchEchelon *e, size_t *result);

/**
 * Copies up to `capacity` pivot column indices into `buf` and stores the
 * full count in `len`. Pass a null `buf` to query the count.
 */
enum EchStatus ech_echelon_pivot_cols(const struct EchEchelon *e,
                                      size_t *buf,
                                      size_t capacity,
                                      size_t *len);

enum EchStatus ech_echelon_matrix(const struct EchEchelon *e,
                                  enum EchEchelonPart part,
                                  struct EchMatrix **result);

/**
 * The echelon form in the line-oriented structured text format.
 */
enum EchStatus ech_echelon_to_structured(const struct EchEchelon *e, char **result);

/**
 * `A = C R`. Either output may be null if not wanted.
 */
enum EchStatus ech_cr(const struct EchMatrix *a, struct EchMatrix **c, struct EchMatrix **r);

/**
 * Nullspace basis `X` (`n x (n - r)`), one special solution per column.
 */
enum EchStatus ech_nullspace(const struct EchMatrix *a, struct EchMatrix **result);

/**
 * Solves `A x = b` for an `m x 1` or `1 x m` matrix `b`. `particular`
 * (an `n x 1` matrix) is set to null when the system is inconsistent.
 * `basis` receives the nullspace basis. Both outputs are optional.
 */
enum EchStatus ech_solve(const struct EchMatrix *a,
                         const struct EchMatrix *b,
                         enum EchSolveStatus *status,
                         struct EchMatrix **particular,
                         struct EchMatrix **basis);

/**
 * Checks that the given `r = rank(A)` independent rows and columns (0-based,
 * increasing) cross in an invertible block. Fails with `Precondition` when
 * the counts differ from the rank or a set is dependent. `det` receives the
 * block's determinant as a string and may be null.
 */
enum EchStatus ech_intersection(const struct EchMatrix *a,
                                const size_t *rows,
                                size_t n_rows,
                                const size_t *cols,
                                size_t n_cols,
                                int *invertible,
                                char **det);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECHELON_H */
