#ifndef PRIMEQ_H
#define PRIMEQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PqStatus {
  PQ_STATUS_OK = 0,
  PQ_STATUS_NULL_POINTER = 1,
  PQ_STATUS_CAPACITY = 2,
  PQ_STATUS_DOMAIN = 3,
  PQ_STATUS_RANGE = 4,
  PQ_STATUS_WITNESS_GUARD = 5,
  PQ_STATUS_VALIDATION = 6,
  PQ_STATUS_PARSE = 7,
  PQ_STATUS_IO = 8,
  PQ_STATUS_PANIC = 9,
} PqStatus;

typedef enum PqPauli {
  PQ_PAULI_X = 0,
  PQ_PAULI_Y = 1,
  PQ_PAULI_Z = 2,
} PqPauli;

/**
 * Sieved primality table.
 */
typedef struct PqPrimeTable PqPrimeTable;

/**
 * Dense statevector.
 */
typedef struct PqState PqState;

/**
 * One quantum-counting estimate.
 */
typedef struct PqCountEstimate {
  uint64_t y_observed;
  double m_tilde;
  double abs_err;
  double bound;
  uint64_t oracle_calls;
  bool within_bound;
} PqCountEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message on this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t pq_last_error_message(char *buf, uintptr_t len);

/**
 * Sieves every integer below `limit` (4 ≤ limit ≤ 2^34).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PqStatus pq_prime_table_new(uint64_t limit, struct PqPrimeTable **out);

/**
 * # Safety
 * `table` must come from `pq_prime_table_new` and not be freed twice.
 */
void pq_prime_table_free(struct PqPrimeTable *table);

/**
 * # Safety
 * `table` must be a live handle.
 */
uint64_t pq_prime_table_limit(const struct PqPrimeTable *table);

/**
 * π(x), for x below the table limit.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum PqStatus pq_pi(const struct PqPrimeTable *table, uint64_t x, uint64_t *out);

/**
 * π(x; a, b), primes p ≤ x with p ≡ b (mod a).
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum PqStatus pq_pi_ab(const struct PqPrimeTable *table,
                       uint64_t a,
                       uint64_t b,
                       uint64_t x,
                       uint64_t *out);

/**
 * Miller–Rabin with the given witnesses; `count == 0` selects the
 * deterministic set {2, 3, 5, 7, 11, 13, 17}.
 *
 * # Safety
 * `witnesses` must point to `count` values when `count > 0`; `out` valid.
 */
enum PqStatus pq_is_prime(uint64_t x, const uint64_t *witnesses, uintptr_t count, bool *out);

/**
 * Builds the Prime state on `n` qubits, without |2⟩ when `odd` is set.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum PqStatus pq_prime_state_new(uint32_t n,
                                 const struct PqPrimeTable *table,
                                 bool odd,
                                 struct PqState **out);

/**
 * # Safety
 * `state` must come from this library and not be freed twice.
 */
void pq_state_free(struct PqState *state);

/**
 * # Safety
 * `state` must be a live handle.
 */
uint32_t pq_state_num_qubits(const struct PqState *state);

/**
 * # Safety
 * `state` must be a live handle; `re` and `im` valid.
 */
enum PqStatus pq_state_amplitude(const struct PqState *state, uint64_t x, double *re, double *im);

/**
 * Entanglement entropy in nats across the cut after the first `l` qubits.
 *
 * # Safety
 * `state` must be a live handle and `out` valid.
 */
enum PqStatus pq_entanglement_entropy(const struct PqState *state, uint32_t l, double *out);

/**
 * # Safety
 * `state` must be a live handle and `out` valid.
 */
enum PqStatus pq_pauli_expectation(const struct PqState *state,
                                   uint32_t i,
                                   enum PqPauli axis,
                                   double *out);

/**
 * `⟨X_i X_j + Y_i Y_j⟩`.
 *
 * # Safety
 * `state` must be a live handle and `out` valid.
 */
enum PqStatus pq_two_site_flip(const struct PqState *state, uint32_t i, uint32_t j, double *out);

/**
 * Grover iteration count for `m` marked items out of `big_n`.
 *
 * # Safety
 * `out` must be valid.
 */
enum PqStatus pq_optimal_iterations(uint64_t big_n, uint64_t m, uint64_t *out);

/**
 * `sin²((2R + 1) θ/2)`.
 */
double pq_pg_analytic(uint64_t big_n, uint64_t m, uint64_t r);

/**
 * Overlap `|⟨P_n|G^R|ψ⟩|²` from a statevector run.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum PqStatus pq_grover_overlap(uint32_t n,
                                const struct PqPrimeTable *table,
                                uint64_t r,
                                double *out);

/**
 * Samples one quantum-counting estimate of `m` with a `t`-bit register.
 *
 * # Safety
 * `out` must be valid.
 */
enum PqStatus pq_count_estimate(uint64_t big_n,
                                uint64_t m,
                                uint32_t t,
                                uint64_t seed,
                                struct PqCountEstimate *out);

/**
 * Runs the reversible Miller–Rabin oracle on odd `x` in an `n`-bit register.
 * `count == 0` selects the deterministic witnesses.
 *
 * # Safety
 * `witnesses` must point to `count` values when `count > 0`; outputs valid.
 */
enum PqStatus pq_oracle_phase_flip(uint64_t x,
                                   uint32_t n,
                                   const uint64_t *witnesses,
                                   uintptr_t count,
                                   bool *phase_flip,
                                   bool *restored);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRIMEQ_H */
