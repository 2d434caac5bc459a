#ifndef NADIC_H
#define NADIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the library's error names.
 */
typedef enum {
  NadicOk = 0,
  NadicInvalidArgument = 1,
  NadicNotInvertible = 2,
  NadicDenominatorNotUnit = 3,
  NadicInvalidDigit = 4,
  NadicUnsupportedPrime2 = 5,
  NadicNonUnit = 6,
  NadicNoSquareRoot = 7,
  NadicOutsideConvergenceRadius = 8,
  NadicNotPeriodic = 9,
  NadicInvalidFamily = 10,
  NadicDegenerateSquare = 11,
  NadicInvalidCharacter = 12,
  NadicNotCoprime = 13,
  NadicUnsupportedShape = 14,
  NadicParseError = 15,
  NadicInternalError = 16,
  /**
   * A required pointer argument was null.
   */
  NadicNullPointer = 17,
} nadic_status;

/**
 * Opaque ring handle (base n, precision k).
 */
typedef struct nadic_ctx nadic_ctx;

/**
 * Opaque ring-element handle.
 */
typedef struct nadic_elem nadic_elem;

/**
 * Opaque generator handle.
 */
typedef struct nadic_prng nadic_prng;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Short stable name for a status code ("ok", "not-invertible", ...).
 */
const char *nadic_status_name(nadic_status status);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void nadic_string_free(char *s);

/**
 * Create the ring Z/base^precision Z.
 */
nadic_status nadic_ctx_new(uint64_t base, uint32_t precision, nadic_ctx **out);

/**
 * # Safety
 * `ctx` must come from `nadic_ctx_new` and not be freed twice.
 */
void nadic_ctx_free(nadic_ctx *ctx);

nadic_status nadic_ctx_base(const nadic_ctx *ctx, uint64_t *out);

nadic_status nadic_ctx_precision(const nadic_ctx *ctx, uint32_t *out);

/**
 * Parse a (possibly signed) decimal integer into its canonical residue.
 */
nadic_status nadic_elem_from_decimal(const nadic_ctx *ctx, const char *decimal, nadic_elem **out);

/**
 * # Safety
 * `elem` must come from this library and not be freed twice.
 */
void nadic_elem_free(nadic_elem *elem);

/**
 * Canonical residue as a decimal string; free with `nadic_string_free`.
 */
nadic_status nadic_elem_to_decimal(const nadic_elem *elem, char **out);

/**
 * Base-n digit expansion, most-significant digit first, exactly k digits.
 */
nadic_status nadic_elem_digits(const nadic_elem *elem, char **out);

nadic_status nadic_elem_add(const nadic_elem *a, const nadic_elem *b, nadic_elem **out);

nadic_status nadic_elem_sub(const nadic_elem *a, const nadic_elem *b, nadic_elem **out);

nadic_status nadic_elem_mul(const nadic_elem *a, const nadic_elem *b, nadic_elem **out);

/**
 * Multiplicative inverse; fails with `not-invertible` on non-units.
 */
nadic_status nadic_elem_invert(const nadic_elem *elem, nadic_elem **out);

/**
 * Hensel-lifted square root on the default branch (smallest root mod each
 * prime); `iterations` receives the Newton step count and may be null.
 */
nadic_status nadic_elem_sqrt(const nadic_elem *elem, nadic_elem **out, uint32_t *iterations);

/**
 * Last `digits` decimal digits of Graham's number, most-significant first.
 */
nadic_status nadic_graham_last_digits(uint32_t digits, char **out);

/**
 * Seed the square-root generator; base must be odd-prime-only, k >= 8,
 * seed >= 1.
 */
nadic_status nadic_prng_new(const nadic_ctx *ctx, uint64_t seed, nadic_prng **out);

/**
 * # Safety
 * `prng` must come from `nadic_prng_new` and not be freed twice.
 */
void nadic_prng_free(nadic_prng *prng);

/**
 * Next six-digit block as text, most-significant digit first.
 */
nadic_status nadic_prng_next_block(nadic_prng *prng, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NADIC_H */
