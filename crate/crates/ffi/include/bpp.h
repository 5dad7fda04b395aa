#ifndef BPP_H
#define BPP_H

#include <stdint.h>
#include <stddef.h>

/**
 * Result code of every call.
 */
typedef enum BppStatus {
  BPP_STATUS_OK = 0,
  BPP_STATUS_NULL_POINTER = 1,
  BPP_STATUS_INVALID_UTF8 = 2,
  BPP_STATUS_INVALID_ARGUMENT = 3,
  BPP_STATUS_OVERFLOW = 4,
  BPP_STATUS_PANIC = 5,
} BppStatus;

/**
 * Opaque isotypic measure of `V_lambda (x) V_mu`.
 */
typedef struct BppMeasure BppMeasure;

/**
 * Opaque mixed-moment word `A^p1 B^q1 ... A^pd B^qd`.
 */
typedef struct BppWord BppWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the library.
 */
const char *bpp_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void bpp_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *bpp_version(void);

/**
 * Weyl dimension of the signature `parts[0..n]`.
 *
 * # Safety
 * `parts` must point to `n` integers and `out` must be writable.
 */
enum BppStatus bpp_weyl_dim(const int64_t *parts, size_t n, uint64_t *out);

/**
 * Number of `steps`-step monotone walks between two permutations in one-line notation (1-based).
 *
 * # Safety
 * `pi1` and `pi2` must point to `d` integers and `out` must be writable.
 */
enum BppStatus bpp_count_monotone_walks(const uint32_t *pi1,
                                        const uint32_t *pi2,
                                        size_t d,
                                        size_t steps,
                                        uint64_t *out);

/**
 * Weingarten function of a cycle type as JSON `{"class": [...], "value": "..."}`.
 *
 * # Safety
 * `cycle_type` must point to `len` integers; `out` receives a string for [`bpp_string_free`].
 */
enum BppStatus bpp_wg_json(const uint32_t *cycle_type, size_t len, char **out);

/**
 * Biasimir reduction as JSON `{"classical": {...}, "quantum": {...}}`.
 *
 * # Safety
 * `perm` must be a NUL-terminated string, `exps` must point to `d` integers.
 */
enum BppStatus bpp_biasimir_json(const char *perm, const uint32_t *exps, size_t d, char **out);

/**
 * Create a word handle; release it with [`bpp_word_free`].
 *
 * # Safety
 * `p` and `q` must point to `d` integers; `out` must be writable.
 */
enum BppStatus bpp_word_new(const uint32_t *p, const uint32_t *q, size_t d, struct BppWord **out);

/**
 * # Safety
 * `w` must come from [`bpp_word_new`] and must not be used afterwards. Null is ignored.
 */
void bpp_word_free(struct BppWord *w);

/**
 * Classical/quantum decomposition as JSON; with `limit != 0` also the `N -> infinity` limit.
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum BppStatus bpp_tau_json(const struct BppWord *w, int32_t limit, char **out);

/**
 * # Safety
 * `lambda` and `mu` must point to `n` integers; `out` must be writable.
 */
enum BppStatus bpp_measure_new(const int64_t *lambda,
                               const int64_t *mu,
                               size_t n,
                               struct BppMeasure **out);

/**
 * # Safety
 * `m` must come from [`bpp_measure_new`] and must not be used afterwards. Null is ignored.
 */
void bpp_measure_free(struct BppMeasure *m);

/**
 * Number of signatures in the support.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum BppStatus bpp_measure_len(const struct BppMeasure *m, size_t *out);

/**
 * Probabilities as JSON `{"(2,0)": "3/4", ...}`.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum BppStatus bpp_measure_json(const struct BppMeasure *m, char **out);

/**
 * `count` seeded draws as a JSON list of signatures.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum BppStatus bpp_measure_sample_json(const struct BppMeasure *m,
                                       uint64_t seed,
                                       size_t count,
                                       char **out);

/**
 * Deformed power sum of the particles `c_i = hbar (lambda_i + N - i)`, as a `"p/q"` string.
 *
 * # Safety
 * `lambda` must point to `n` integers, `hbar` must be a NUL-terminated rational, `out` writable.
 */
enum BppStatus bpp_power_sum(const int64_t *lambda,
                             size_t n,
                             const char *hbar,
                             uint32_t k,
                             int32_t normalized,
                             char **out);

/**
 * Run the command line with `argv[0..argc]` (without the program name).
 *
 * `exit_code` receives 0, 1 or 2 as the `bpp` binary would return; `out`
 * receives standard output on success or the error text otherwise.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; `exit_code` and `out` must be writable.
 */
enum BppStatus bpp_run(size_t argc, const char *const *argv, int32_t *exit_code, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BPP_H */
