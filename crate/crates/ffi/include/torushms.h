#ifndef TORUSHMS_H
#define TORUSHMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum TorushmsStatus {
  TORUSHMS_STATUS_OK = 0,
  TORUSHMS_STATUS_NULL_POINTER = 1,
  TORUSHMS_STATUS_INVALID_UTF8 = 2,
  TORUSHMS_STATUS_PARSE_ERROR = 3,
  TORUSHMS_STATUS_INVALID_ARGUMENT = 4,
  TORUSHMS_STATUS_NON_TRANSVERSE = 5,
  TORUSHMS_STATUS_DEGENERATE_CONFIGURATION = 6,
  TORUSHMS_STATUS_MARKER_COLLISION = 7,
  TORUSHMS_STATUS_UNANCHORED_SLOPE = 8,
  TORUSHMS_STATUS_NON_UNIT = 9,
  TORUSHMS_STATUS_OTHER_DOMAIN_ERROR = 10,
  TORUSHMS_STATUS_PANIC = 11,
} TorushmsStatus;

// A parsed brane.
typedef struct TorushmsBrane TorushmsBrane;

// A truncated series with complex coefficients.
typedef struct TorushmsSeries TorushmsSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *torushms_version(void);

// Message of the last failed call on this thread (empty if none). Valid
// until the next call into the library on the same thread.
const char *torushms_last_error(void);

// Releases a string returned by this library. Accepts null.
//
// # Safety
// `s` must be null or a string obtained from this library, not yet freed.
void torushms_string_free(char *s);

// Parses a brane literal such as `L(0,-1;1/3){M=phase 1/5}`.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum TorushmsStatus torushms_brane_parse(const char *text, struct TorushmsBrane **out);

// Releases a brane handle. Accepts null.
//
// # Safety
// `b` must be null or a handle from [`torushms_brane_parse`], not yet freed.
void torushms_brane_free(struct TorushmsBrane *b);

// Number of generators of `CF(l0, l1)` and their common degree.
//
// # Safety
// Handles must be live; output pointers must be valid.
enum TorushmsStatus torushms_cf_generators(const struct TorushmsBrane *l0,
                                           const struct TorushmsBrane *l1,
                                           uintptr_t *out_count,
                                           int64_t *out_degree);

// Coefficient at generator `index` of `μ²(φ₂, φ₁)` where `φ₁`, `φ₂` have
// coefficient 1 on every generator. All three branes must have rank one.
//
// # Safety
// Handles must be live; `out` must be valid.
enum TorushmsStatus torushms_mu2_unit(const struct TorushmsBrane *l0,
                                      const struct TorushmsBrane *l1,
                                      const struct TorushmsBrane *l2,
                                      uintptr_t index,
                                      int64_t cutoff_num,
                                      int64_t cutoff_den,
                                      struct TorushmsSeries **out);

// The product of the section with coefficients `σ = (s0, s1)` and the
// generator of `CF(L_{(0,−1),x}, L_{(1,2)})` with monodromy `e^{2πi·phase}`.
//
// # Safety
// `out` must be valid.
enum TorushmsStatus torushms_step1_series(int64_t x_num,
                                          int64_t x_den,
                                          int64_t phase_num,
                                          int64_t phase_den,
                                          double s0_re,
                                          double s0_im,
                                          double s1_re,
                                          double s1_im,
                                          int64_t cutoff_num,
                                          int64_t cutoff_den,
                                          struct TorushmsSeries **out);

// Number of stored terms.
//
// # Safety
// `s` must be null or a live handle.
uintptr_t torushms_series_len(const struct TorushmsSeries *s);

// The `i`-th term in increasing exponent order.
//
// # Safety
// `s` must be a live handle; output pointers must be valid.
enum TorushmsStatus torushms_series_term(const struct TorushmsSeries *s,
                                         uintptr_t i,
                                         int64_t *exp_num,
                                         int64_t *exp_den,
                                         double *re,
                                         double *im);

// Releases a series handle. Accepts null.
//
// # Safety
// `s` must be null or a live handle from this library.
void torushms_series_free(struct TorushmsSeries *s);

// Rank and degree of the K-theory class of an anchored brane.
//
// # Safety
// `b` must be live; output pointers must be valid.
enum TorushmsStatus torushms_theta_sharp(const struct TorushmsBrane *b,
                                         int64_t *out_rank,
                                         int64_t *out_degree);

// Whether the injectivity witness at `x` is nonzero (1) or zero (0).
//
// # Safety
// `out_nonzero` must be valid.
enum TorushmsStatus torushms_witness_nonzero(int64_t x_num,
                                             int64_t x_den,
                                             double tol,
                                             int32_t *out_nonzero);

// Runs a command-line invocation (`argv[0]` is the program name) and
// returns its exit code, stdout and stderr. Output strings are always set
// on success and must be released with [`torushms_string_free`].
//
// # Safety
// `argv` must hold `argc` valid NUL-terminated strings; outputs must be valid.
enum TorushmsStatus torushms_cli_run(uintptr_t argc,
                                     const char *const *argv,
                                     int32_t *out_exit,
                                     char **out_stdout,
                                     char **out_stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORUSHMS_H */
