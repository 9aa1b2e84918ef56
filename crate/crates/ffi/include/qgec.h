#ifndef QGEC_H
#define QGEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum QgecStatus {
  QGEC_STATUS_OK = 0,
  QGEC_STATUS_NULL_POINTER = 1,
  QGEC_STATUS_INVALID_ARGUMENT = 2,
  QGEC_STATUS_DIMENSION_MISMATCH = 3,
  QGEC_STATUS_UNKNOWN_CODE = 4,
  QGEC_STATUS_UNKNOWN_DECODER = 5,
  QGEC_STATUS_DECODE = 6,
  QGEC_STATUS_INTERNAL = 7,
} QgecStatus;

typedef enum QgecResidual {
  QGEC_RESIDUAL_TRIVIAL = 0,
  QGEC_RESIDUAL_LOGICAL_X = 1,
  QGEC_RESIDUAL_LOGICAL_Z = 2,
  QGEC_RESIDUAL_LOGICAL_Y = 3,
  QGEC_RESIDUAL_SYNDROME_NONZERO = 4,
} QgecResidual;

/**
 * A constructed code.
 */
typedef struct QgecCode QgecCode;

/**
 * A decoder bound to one code.
 */
typedef struct QgecDecoder QgecDecoder;

/**
 * Counts for one Monte Carlo point.
 */
typedef struct QgecTally {
  uint64_t trials;
  uint64_t failures;
  uint64_t fail_x;
  uint64_t fail_z;
  uint64_t fail_y;
  uint64_t inconsistent;
  double rate;
  double ci_low;
  double ci_high;
} QgecTally;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *qgec_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qgec_version(void);

/**
 * Builds `golay:h1|h2|h3` or `toric:<d>`. Free with [`qgec_code_free`].
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QgecStatus qgec_code_open(const char *id, struct QgecCode **out);

/**
 * # Safety
 * `code` must come from [`qgec_code_open`] and not be used afterwards.
 */
void qgec_code_free(struct QgecCode *code);

/**
 * Physical qubits `n`; 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t qgec_code_num_qubits(const struct QgecCode *code);

/**
 * Logical qubits `k`; 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t qgec_code_num_logicals(const struct QgecCode *code);

/**
 * Syndrome width: Z-check outcomes then X-check outcomes.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t qgec_code_syndrome_len(const struct QgecCode *code);

/**
 * Label/correction width `2n`: x-part then z-part.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t qgec_code_label_len(const struct QgecCode *code);

/**
 * Writes the syndrome of the Pauli error given as a `2n` label.
 *
 * # Safety
 * Pointers must be valid for the given lengths.
 */
enum QgecStatus qgec_code_extract_syndrome(const struct QgecCode *code,
                                           const uint8_t *label,
                                           size_t label_len,
                                           uint8_t *syndrome,
                                           size_t syndrome_len);

/**
 * Classifies a residual (error times correction) given as a `2n` label.
 *
 * # Safety
 * Pointers must be valid for the given lengths.
 */
enum QgecStatus qgec_code_classify_residual(const struct QgecCode *code,
                                            const uint8_t *residual,
                                            size_t residual_len,
                                            enum QgecResidual *out);

/**
 * Draws one error from the biased channel on stream `(seed, point, trial)`,
 * the same stream the sweep uses for that trial.
 *
 * # Safety
 * Pointers must be valid for the given lengths.
 */
enum QgecStatus qgec_sample_error(const struct QgecCode *code,
                                  double p,
                                  double eta,
                                  uint64_t seed,
                                  uint64_t point,
                                  uint64_t trial,
                                  uint8_t *label,
                                  size_t label_len);

/**
 * Creates `table`, `match`, or `external:<target>` for `code`. The decoder
 * keeps its own reference to the code. Free with [`qgec_decoder_free`].
 *
 * # Safety
 * `code` must be live, `name` NUL-terminated and `out` valid.
 */
enum QgecStatus qgec_decoder_new(const struct QgecCode *code,
                                 const char *name,
                                 struct QgecDecoder **out);

/**
 * # Safety
 * `decoder` must come from [`qgec_decoder_new`] and not be used afterwards.
 */
void qgec_decoder_free(struct QgecDecoder *decoder);

/**
 * Decodes one syndrome into a `2n` correction.
 *
 * # Safety
 * Pointers must be valid for the given lengths.
 */
enum QgecStatus qgec_decoder_decode(const struct QgecDecoder *decoder,
                                    const uint8_t *syndrome,
                                    size_t syndrome_len,
                                    uint8_t *correction,
                                    size_t correction_len);

/**
 * Runs `trials` Monte Carlo shots at one physical error rate. Matches grid
 * index 0 of a sweep with the same seed.
 *
 * # Safety
 * `decoder` must be live and `out` valid.
 */
enum QgecStatus qgec_run_point(const struct QgecDecoder *decoder,
                               double p,
                               double eta,
                               uint64_t trials,
                               uint64_t seed,
                               struct QgecTally *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGEC_H */
