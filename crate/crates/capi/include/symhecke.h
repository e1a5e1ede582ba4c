#ifndef SYMHECKE_H
#define SYMHECKE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum ShStatus {
  ShOk = 0,
  ShErrParse = 1,
  ShErrSingular = 2,
  ShErrPrecondition = 3,
  ShErrPrecision = 4,
  ShErrBudget = 5,
  ShErrInternal = 6,
  ShErrNullArgument = 7,
} ShStatus;

/**
 * Opaque handle around an exact matrix over k((z)).
 */
typedef struct ShMatrix ShMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *sh_version(void);

/**
 * Short human-readable description of a status code; static, do not free.
 */
const char *sh_status_message(enum ShStatus status);

/**
 * Parse a matrix from its JSON encoding
 * {"p": prime, "dim": m, "entries": [[row, col, [[exp, coeff], ...]], ...]}.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum ShStatus sh_matrix_parse(const char *json, struct ShMatrix **out);

/**
 * Release a matrix handle.
 *
 * # Safety
 * `m` must come from `sh_matrix_parse` and not be freed twice.
 */
void sh_matrix_free(struct ShMatrix *m);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from a symhecke call and not be freed twice.
 */
void sh_string_free(char *s);

/**
 * Dominant coweight as a JSON array of parts.
 *
 * # Safety
 * `m` must be a live handle; `out` a valid pointer.
 */
enum ShStatus sh_rho(const struct ShMatrix *m, char **out);

/**
 * Symmetric coweight as JSON {"blocks": [...], "z": n, "one": n, "padded": [...]}.
 * `precision` <= 0 selects the default policy.
 *
 * # Safety
 * `m` must be a live handle; `out` a valid pointer.
 */
enum ShStatus sh_sigma(const struct ShMatrix *m, int64_t precision, char **out);

/**
 * Evaluate a closed formula. `rule` is one of computen, compute1, mainthm,
 * corollary, young, dual-n, dual-1; `params` is space-separated key=value
 * pairs (shapes as comma lists, e.g. "l=1 nu=3,0 lambda=4,0"). The result is
 * JSON {"poly": [[deg, coeff], ...], "display": "..."}.
 *
 * # Safety
 * `rule`, `params`, and `out` must be valid pointers.
 */
enum ShStatus sh_formula(const char *rule, const char *params, char **out);

/**
 * Brute-force structure constants: counts of sigma(X * Pi^nu) over the mu
 * family, as JSON {"counts": {"lambda": count, ...}, "total": n}.
 * `threads` = 0 selects single-threaded operation.
 *
 * # Safety
 * `mu`, `nu`, and `out` must be valid pointers.
 */
enum ShStatus sh_brute(uint64_t prime,
                       const char *mu,
                       const char *nu,
                       uint32_t threads,
                       char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYMHECKE_H */
