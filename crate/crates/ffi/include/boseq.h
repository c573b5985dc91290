#ifndef BOSEQ_H
#define BOSEQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum BoseqStatus {
  BOSEQ_STATUS_OK = 0,
  BOSEQ_STATUS_NULL_POINTER = 1,
  BOSEQ_STATUS_INVALID_ARGUMENT = 2,
  BOSEQ_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * Dimension cap or truncation limit exceeded.
   */
  BOSEQ_STATUS_NUMERICAL_CAP = 4,
  BOSEQ_STATUS_NON_HERMITIAN = 5,
  /**
   * Deutsch measurement without a decisive outcome; overlaps are still reported.
   */
  BOSEQ_STATUS_AMBIGUOUS = 6,
  BOSEQ_STATUS_SCHEDULE = 7,
  BOSEQ_STATUS_NUMERICAL_FAILURE = 8,
  BOSEQ_STATUS_PANIC = 9,
} BoseqStatus;

typedef enum BoseqAxis {
  BOSEQ_AXIS_X = 0,
  BOSEQ_AXIS_Y = 1,
  BOSEQ_AXIS_Z = 2,
} BoseqAxis;

typedef enum BoseqOracle {
  BOSEQ_ORACLE_CONST0 = 0,
  BOSEQ_ORACLE_CONST1 = 1,
  BOSEQ_ORACLE_BAL01 = 2,
  BOSEQ_ORACLE_BAL10 = 3,
} BoseqOracle;

/**
 * A linear operator on a register.
 */
typedef struct BoseqOperator BoseqOperator;

/**
 * A multi-site register state.
 */
typedef struct BoseqState BoseqState;

/**
 * Outcome of [`boseq_deutsch`]. `classification` is 0 for constant, 1 for
 * balanced and -1 when ambiguous.
 */
typedef struct BoseqDeutschResult {
  int32_t classification;
  double overlap_plus;
  double overlap_minus;
} BoseqDeutschResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *boseq_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *boseq_last_error(void);

/**
 * Largest register dimension any call may allocate.
 */
void boseq_set_dim_cap(size_t cap);

size_t boseq_dim_cap(void);

/**
 * Product of coherent bosonic qubits. `amps` holds `4 * n_sites` doubles:
 * `re(alpha), im(alpha), re(beta), im(beta)` for each site in order.
 *
 * # Safety
 * `amps` must point to `4 * n_sites` readable doubles and `out` must be writable.
 */
enum BoseqStatus boseq_state_coherent(size_t n_bosons,
                                      size_t n_sites,
                                      const double *amps,
                                      struct BoseqState **out);

/**
 * Fock basis state with `ks[n]` bosons in mode `a` on site `n + 1`.
 *
 * # Safety
 * `ks` must point to `n_sites` readable values and `out` must be writable.
 */
enum BoseqStatus boseq_state_fock(size_t n_bosons,
                                  size_t n_sites,
                                  const size_t *ks,
                                  struct BoseqState **out);

/**
 * # Safety
 * `state` must come from this library and not be freed twice; null is ignored.
 */
void boseq_state_free(struct BoseqState *state);

/**
 * Number of amplitudes, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t boseq_state_dim(const struct BoseqState *state);

/**
 * Copies amplitudes as interleaved `re, im` pairs into `out`, which must hold
 * `2 * dim` doubles.
 *
 * # Safety
 * `state` must be a live handle and `out` must point to `len` writable doubles.
 */
enum BoseqStatus boseq_state_amplitudes(const struct BoseqState *state, double *out, size_t len);

/**
 * `|<a|b>|`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum BoseqStatus boseq_state_fidelity(const struct BoseqState *a,
                                      const struct BoseqState *b,
                                      double *out);

/**
 * `S^axis` on `site` (1-based) of an `n_sites` register; `axis` is a [`BoseqAxis`] value.
 *
 * # Safety
 * `out` must be writable.
 */
enum BoseqStatus boseq_operator_spin(uint32_t axis_code,
                                     size_t site,
                                     size_t n_sites,
                                     size_t n_bosons,
                                     struct BoseqOperator **out);

/**
 * Identity on a `dim`-dimensional space.
 *
 * # Safety
 * `out` must be writable.
 */
enum BoseqStatus boseq_operator_identity(size_t dim, struct BoseqOperator **out);

/**
 * `ca * a + cb * b`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum BoseqStatus boseq_operator_combine(const struct BoseqOperator *a,
                                        double ca,
                                        const struct BoseqOperator *b,
                                        double cb,
                                        struct BoseqOperator **out);

/**
 * Matrix product `a * b`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum BoseqStatus boseq_operator_multiply(const struct BoseqOperator *a,
                                         const struct BoseqOperator *b,
                                         struct BoseqOperator **out);

/**
 * # Safety
 * `op` must be null or a live handle.
 */
size_t boseq_operator_dim(const struct BoseqOperator *op);

/**
 * # Safety
 * `op` must come from this library and not be freed twice; null is ignored.
 */
void boseq_operator_free(struct BoseqOperator *op);

/**
 * `e^{-iHt} |state>` as a new handle.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum BoseqStatus boseq_evolve(const struct BoseqState *state,
                              const struct BoseqOperator *hamiltonian,
                              double t,
                              struct BoseqState **out);

/**
 * `<state| op |state>`.
 *
 * # Safety
 * Handles must be live; `re` and `im` must be writable.
 */
enum BoseqStatus boseq_expectation(const struct BoseqState *state,
                                   const struct BoseqOperator *op,
                                   double *re,
                                   double *im);

/**
 * Von Neumann entropy in bits of the sites listed in `keep` (1-based).
 *
 * # Safety
 * `state` must be live, `keep` must hold `n_keep` values, `out` writable.
 */
enum BoseqStatus boseq_entanglement_entropy(const struct BoseqState *state,
                                            const size_t *keep,
                                            size_t n_keep,
                                            double *out);

/**
 * Deutsch's algorithm with oracle `oracle` (a [`BoseqOracle`] value) applied
 * for `t_oracle`. On [`BoseqStatus::Ambiguous`] the overlaps are still filled.
 *
 * # Safety
 * `result` must be writable.
 */
enum BoseqStatus boseq_deutsch(uint32_t oracle,
                               size_t n_bosons,
                               double t_oracle,
                               struct BoseqDeutschResult *result);

/**
 * Parses a qubit schedule and compiles it for `n_bosons`; the normalized
 * result is returned in `out` and must be released with [`boseq_string_free`].
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum BoseqStatus boseq_compile_schedule(const char *text, size_t n_bosons, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice; null is ignored.
 */
void boseq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOSEQ_H */
