#ifndef HTENSOR_H
#define HTENSOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HtStatus {
  HT_STATUS_OK = 0,
  HT_STATUS_NULL_POINTER = 1,
  HT_STATUS_INVALID_UTF8 = 2,
  HT_STATUS_PARSE = 3,
  HT_STATUS_INVALID_ARGUMENT = 4,
  HT_STATUS_NOT_HERMITIAN = 5,
  HT_STATUS_CONVERGENCE_FAILURE = 6,
  HT_STATUS_BUFFER_TOO_SMALL = 7,
  HT_STATUS_DOMAIN = 8,
  HT_STATUS_PANIC = 9,
} HtStatus;

typedef enum HtVerdict {
  HT_VERDICT_POSITIVE_DEFINITE = 0,
  HT_VERDICT_POSITIVE_SEMIDEFINITE = 1,
  HT_VERDICT_INDEFINITE_OR_NEGATIVE = 2,
  HT_VERDICT_INCONCLUSIVE = 3,
} HtVerdict;

typedef enum HtRule {
  HT_RULE_STRICT_DD = 0,
  HT_RULE_STRICT_LLK = 1,
  HT_RULE_STRICT_LL = 2,
  HT_RULE_DD = 3,
  HT_RULE_LLK = 4,
  HT_RULE_LL = 5,
  HT_RULE_EXTREMAL_EIGENVALUE = 6,
  HT_RULE_BLOCK_CRITERION = 7,
} HtRule;

typedef enum HtInclusionSet {
  HT_INCLUSION_SET_GERSHGORIN = 0,
  HT_INCLUSION_SET_LLK = 1,
  HT_INCLUSION_SET_LL = 2,
} HtInclusionSet;

// Opaque tensor handle.
typedef struct HtTensor HtTensor;

typedef struct HtSolverConfig {
  size_t starts;
  double newton_tol;
  size_t max_iter;
  double dedup_tol;
  uint64_t rng_seed;
} HtSolverConfig;

typedef struct HtComplex {
  double re;
  double im;
} HtComplex;

// Verdict, deciding rule and slack of a certificate. The full witness is
// available through `ht_certify_json`.
typedef struct HtCertificate {
  enum HtVerdict verdict;
  enum HtRule rule;
  double slack;
} HtCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default solver settings.
struct HtSolverConfig ht_solver_config_default(void);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next library call on the same thread.
const char *ht_last_error_message(void);

// Parses a tensor file (`{"m", "n", "entries"}`, 1-based indices).
enum HtStatus ht_tensor_from_json(const char *json, struct HtTensor **out);

// Builds a tensor from `nnz` entries. `indices` holds `nnz * 2m` 1-based
// indices, entry after entry; `values` holds `nnz` coefficients.
enum HtStatus ht_tensor_new(size_t m,
                            size_t n,
                            const size_t *indices,
                            const struct HtComplex *values,
                            size_t nnz,
                            struct HtTensor **out);

// Releases a handle. Null is ignored.
void ht_tensor_free(struct HtTensor *t);

// Releases a string returned by the library. Null is ignored.
void ht_string_free(char *s);

enum HtStatus ht_tensor_dims(const struct HtTensor *t, size_t *m, size_t *n);

// Number of stored (nonzero) entries.
enum HtStatus ht_tensor_nnz(const struct HtTensor *t, size_t *out);

enum HtStatus ht_tensor_is_hermitian(const struct HtTensor *t, bool *out);

enum HtStatus ht_tensor_is_cps(const struct HtTensor *t, bool *out);

// New handle holding the conjugate partial symmetrization.
enum HtStatus ht_symmetrize(const struct HtTensor *t, struct HtTensor **out);

// Tensor file text for a handle; free with `ht_string_free`.
enum HtStatus ht_tensor_to_json(const struct HtTensor *t, char **out);

// The conjugate form at `x` (length `len`).
enum HtStatus ht_eval_form(const struct HtTensor *t,
                           const struct HtComplex *x,
                           size_t len,
                           struct HtComplex *out);

// Smallest and largest eigenvalue of the symmetrization. `cfg` may be null.
enum HtStatus ht_extremal(const struct HtTensor *t,
                          const struct HtSolverConfig *cfg,
                          double *lambda_min,
                          double *lambda_max);

// Distinct eigenvalues (real parts, ascending) found by the multi-start
// solver. `count` receives the number found; when it exceeds `capacity`
// nothing is written and `BufferTooSmall` is returned.
enum HtStatus ht_enumerate(const struct HtTensor *t,
                           const struct HtSolverConfig *cfg,
                           double *out,
                           size_t capacity,
                           size_t *count);

// Definiteness certificate with the automatic rule order.
enum HtStatus ht_certify(const struct HtTensor *t,
                         const struct HtSolverConfig *cfg,
                         struct HtCertificate *out);

// Full certificate, witness included, as JSON; free with `ht_string_free`.
enum HtStatus ht_certify_json(const struct HtTensor *t,
                              const struct HtSolverConfig *cfg,
                              char **out);

// Whether `z` lies in the chosen inclusion set of `t`.
enum HtStatus ht_inclusion_contains(const struct HtTensor *t,
                                    enum HtInclusionSet set,
                                    struct HtComplex z,
                                    bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HTENSOR_H */
