#ifndef SCMS_FFI_H
#define SCMS_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum ScmsStatus {
  /**
   * Success.
   */
  ScmsOk = 0,
  /**
   * A required pointer argument was null.
   */
  ScmsErrNullArg = 1,
  /**
   * Input bytes failed to decode.
   */
  ScmsErrDecode = 2,
  /**
   * Cryptographic verification failed.
   */
  ScmsErrVerify = 3,
  /**
   * The caller buffer is too small; the required size is in `written`.
   */
  ScmsErrBufferTooSmall = 4,
  /**
   * An argument value is out of range.
   */
  ScmsErrInvalidArg = 5,
} ScmsStatus;

/**
 * Opaque decoded certificate.
 */
typedef struct ScmsCertificate ScmsCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *scms_version(void);

/**
 * Decodes a canonical certificate into an opaque handle.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes and `out` must be a valid
 * pointer; the handle must be released with [`scms_cert_free`].
 */
enum ScmsStatus scms_cert_decode(const uint8_t *bytes, uintptr_t len, struct ScmsCertificate **out);

/**
 * Releases a certificate handle. Null is ignored.
 *
 * # Safety
 * `cert` must have come from [`scms_cert_decode`] and not been freed yet.
 */
void scms_cert_free(struct ScmsCertificate *cert);

/**
 * Re-encodes a certificate handle into `buf`.
 *
 * # Safety
 * Pointer arguments must be valid; `buf` must hold `cap` writable bytes.
 */
enum ScmsStatus scms_cert_encode(const struct ScmsCertificate *cert,
                                 uint8_t *buf,
                                 uintptr_t cap,
                                 uintptr_t *written);

/**
 * Certificate kind code: 1 pure-ECC, 2 pure-PQC, 3 hybrid.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum ScmsStatus scms_cert_kind(const struct ScmsCertificate *cert, uint8_t *out);

/**
 * Total encoded length of a certificate handle.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum ScmsStatus scms_cert_encoded_len(const struct ScmsCertificate *cert, uintptr_t *out);

/**
 * Low-order 8 bytes of SHA-256 over arbitrary bytes (the certificate
 * digest when applied to a canonical certificate encoding).
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out8` to 8 writable bytes.
 */
enum ScmsStatus scms_hashed_id8(const uint8_t *bytes, uintptr_t len, uint8_t *out8);

/**
 * Verifies `cert` against `issuer` (signature, issuer reference, validity
 * nesting).
 *
 * # Safety
 * Both handles must be valid.
 */
enum ScmsStatus scms_cert_verify(const struct ScmsCertificate *cert,
                                 const struct ScmsCertificate *issuer);

/**
 * Analytic certificate length C = c + k + s1.
 */
uint64_t scms_cert_length(uint32_t c, uint32_t k, uint32_t s1);

/**
 * Analytic SPDU length U = u + (c + k + s1) + s2.
 */
uint64_t scms_spdu_length(uint32_t u, uint32_t c, uint32_t k, uint32_t s1, uint32_t s2);

/**
 * True iff `length` fits the 1400-byte WSM budget.
 */
bool scms_check_wsm_limit(uint64_t length);

/**
 * Writes the 7-row length table as CSV text (not NUL-terminated).
 *
 * # Safety
 * `buf` must hold `cap` writable bytes; `written` must be valid.
 */
enum ScmsStatus scms_table_lengths_csv(uint8_t *buf, uintptr_t cap, uintptr_t *written);

/**
 * Decodes and fully verifies a certificate chain file.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes.
 */
enum ScmsStatus scms_ccf_verify(const uint8_t *bytes, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCMS_FFI_H */
