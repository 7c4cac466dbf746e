#ifndef TEMPLIE_H
#define TEMPLIE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum TemplieStatus {
  TEMPLIE_STATUS_OK = 0,
  TEMPLIE_STATUS_INVALID_ARGUMENT = 1,
  TEMPLIE_STATUS_SIZE_CAP = 2,
  TEMPLIE_STATUS_NUMERICAL = 3,
  TEMPLIE_STATUS_NULL_POINTER = 4,
  TEMPLIE_STATUS_OUT_OF_RANGE = 5,
  TEMPLIE_STATUS_BUFFER_TOO_SMALL = 6,
  TEMPLIE_STATUS_OVERFLOW = 7,
  TEMPLIE_STATUS_INTERNAL = 8,
} TemplieStatus;

// Outcome of a numerical certification.
typedef enum TemplieVerdict {
  TEMPLIE_VERDICT_PASS = 0,
  TEMPLIE_VERDICT_FAIL = 1,
  TEMPLIE_VERDICT_INCONCLUSIVE = 2,
} TemplieVerdict;

// A matrix with entries in `Z[β]`.
typedef struct TemplieMatrix TemplieMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string.
const char *templie_version(void);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next call into the library from the same thread.
const char *templie_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void templie_string_free(char *s);

// Loop Hamiltonian `H_{n,d}`.
//
// # Safety
// `out` must be valid for writes.
enum TemplieStatus templie_loop_hamiltonian(size_t n, size_t d, struct TemplieMatrix **out);

// Intertwiner `f_{n,d}`: rows are spin states on `n - 1` sites, columns links.
//
// # Safety
// `out` must be valid for writes.
enum TemplieStatus templie_intertwiner(size_t n, size_t d, struct TemplieMatrix **out);

// Inner product `S_{n,d} = fᵀ f`.
//
// # Safety
// `out` must be valid for writes.
enum TemplieStatus templie_inner_product(size_t n, size_t d, struct TemplieMatrix **out);

// Gram matrix of `V_{n,d}`.
//
// # Safety
// `out` must be valid for writes.
enum TemplieStatus templie_gram(size_t n, size_t d, struct TemplieMatrix **out);

// Hermitian spin Hamiltonian on all `2^len` states.
//
// # Safety
// `out` must be valid for writes.
enum TemplieStatus templie_spin_hamiltonian(size_t len, struct TemplieMatrix **out);

// Hermitian spin Hamiltonian on the sector `S^z = twice_s / 2`.
//
// # Safety
// `out` must be valid for writes.
enum TemplieStatus templie_spin_sector_hamiltonian(size_t len,
                                                   int64_t twice_s,
                                                   struct TemplieMatrix **out);

// Releases a matrix. Null is ignored.
//
// # Safety
// `m` must come from this library and not have been freed.
void templie_matrix_free(struct TemplieMatrix *m);

// Number of rows, or 0 for null.
//
// # Safety
// `m` must be null or a live handle.
size_t templie_matrix_rows(const struct TemplieMatrix *m);

// Number of columns, or 0 for null.
//
// # Safety
// `m` must be null or a live handle.
size_t templie_matrix_cols(const struct TemplieMatrix *m);

// Degree of an entry; -1 for the zero polynomial.
//
// # Safety
// `m` must be a live handle and `degree` valid for writes.
enum TemplieStatus templie_matrix_entry_degree(const struct TemplieMatrix *m,
                                               size_t row,
                                               size_t col,
                                               int64_t *degree);

// Coefficient of `β^k` in an entry. Fails with `OVERFLOW` if it does not
// fit in 64 bits.
//
// # Safety
// `m` must be a live handle and `value` valid for writes.
enum TemplieStatus templie_matrix_entry_coefficient(const struct TemplieMatrix *m,
                                                    size_t row,
                                                    size_t col,
                                                    size_t k,
                                                    int64_t *value);

// An entry as a JSON array of decimal coefficient strings, lowest degree
// first. Free the result with `templie_string_free`.
//
// # Safety
// `m` must be a live handle and `out` valid for writes.
enum TemplieStatus templie_matrix_entry_string(const struct TemplieMatrix *m,
                                               size_t row,
                                               size_t col,
                                               char **out);

// Evaluates the matrix at `beta` into `buffer`, row-major. `len` must be
// at least rows × cols.
//
// # Safety
// `m` must be a live handle and `buffer` valid for `len` writes.
enum TemplieStatus templie_matrix_eval(const struct TemplieMatrix *m,
                                       double beta,
                                       double *buffer,
                                       size_t len);

// Runs a verification suite ("intertwine", "inject", "pseudo", "gp",
// "suf", "special", "gram-adjoint" or "all"). `n_max = 0` selects the
// suite's default range. On success `*passed` is 1 or 0 and `*json`
// holds the reports.
//
// # Safety
// `suite` must be a nul-terminated string; `passed` and `json` valid for
// writes.
enum TemplieStatus templie_verify(const char *suite, size_t n_max, int32_t *passed, char **json);

// Reality, diagonalisability and positivity of `S` for `H_{n,d}` at one β.
//
// # Safety
// `verdict` and `json` must be valid for writes.
enum TemplieStatus templie_loop_reality(size_t n,
                                        size_t d,
                                        double beta,
                                        double tol,
                                        enum TemplieVerdict *verdict,
                                        char **json);

// Reality of the XXZ spectrum on `n` sites at `q = q_re + i q_im`.
//
// # Safety
// `verdict` and `json` must be valid for writes.
enum TemplieStatus templie_xxz_reality(size_t n,
                                       double q_re,
                                       double q_im,
                                       double tol,
                                       enum TemplieVerdict *verdict,
                                       char **json);

// Decomposes the sector `S^z = twice_s / 2` of `n` spins at a root of
// unity of order `ell` (0 for generic q). `*audit_passed` reports the
// dimension audit.
//
// # Safety
// `audit_passed` and `json` must be valid for writes.
enum TemplieStatus templie_decompose(size_t n,
                                     int64_t twice_s,
                                     uint32_t ell,
                                     int32_t *audit_passed,
                                     char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEMPLIE_H */
