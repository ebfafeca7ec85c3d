/* C interface to the sps-pit identity testing engine. */

#ifndef SPS_PIT_H
#define SPS_PIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pipeline selection for [`sps_pit_check`].
 */
typedef enum SpsPitMode {
  /**
   * Dispatch on the circuit's field.
   */
  SPS_PIT_MODE_AUTO = 0,
  /**
   * All-ones Hadamard witness (fields Q and Qi).
   */
  SPS_PIT_MODE_HADAMARD = 1,
  /**
   * Noncommutative branching-program test (prime fields).
   */
  SPS_PIT_MODE_NCABP = 2,
  /**
   * Brute-force expansion oracle (small instances only).
   */
  SPS_PIT_MODE_ORACLE = 3,
} SpsPitMode;

/**
 * Status code returned by every fallible call.
 */
typedef enum SpsPitStatus {
  SPS_PIT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SPS_PIT_STATUS_NULL_ARGUMENT = 1,
  /**
   * Input text was not valid UTF-8.
   */
  SPS_PIT_STATUS_INVALID_UTF8 = 2,
  /**
   * The circuit or matrix text failed to parse.
   */
  SPS_PIT_STATUS_PARSE_ERROR = 3,
  /**
   * Scalars from different fields were mixed.
   */
  SPS_PIT_STATUS_MIXED_FIELDS = 4,
  /**
   * Division by zero or a vanishing factorial.
   */
  SPS_PIT_STATUS_ARITHMETIC = 5,
  /**
   * An instance exceeded a size or fan-in guard.
   */
  SPS_PIT_STATUS_TOO_LARGE = 6,
  /**
   * The prime-field pipeline needs char(F) > d.
   */
  SPS_PIT_STATUS_UNSUPPORTED_CHARACTERISTIC = 7,
  /**
   * The requested pipeline does not apply to the circuit's field.
   */
  SPS_PIT_STATUS_INVALID_ARGUMENT = 8,
} SpsPitStatus;

/**
 * Verdict of a deterministic check.
 */
typedef enum SpsPitVerdict {
  SPS_PIT_VERDICT_ZERO = 0,
  SPS_PIT_VERDICT_NONZERO = 1,
} SpsPitVerdict;

/**
 * Opaque circuit handle.
 */
typedef struct SpsPitCircuit SpsPitCircuit;

/**
 * Result of [`sps_pit_check`].
 */
typedef struct SpsPitReport {
  enum SpsPitVerdict verdict;
  /**
   * Max product fan-in d.
   */
  uint64_t fan_in;
  /**
   * Number of product terms s.
   */
  uint64_t terms;
  /**
   * Number of variables n.
   */
  uint64_t nvars;
  uint64_t time_ms;
  /**
   * All-ones witness value as a scalar literal; null when the pipeline
   * yields no witness. Free with [`sps_pit_string_free`].
   */
  char *witness;
} SpsPitReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread. Never null.
 */
const char *sps_pit_last_error_message(void);

/**
 * Library version as a static string; do not free.
 */
const char *sps_pit_version(void);

/**
 * Parse a circuit from its text format.
 *
 * # Safety
 * `text` must point to a NUL-terminated string and `out` must be a valid
 * location to store the handle. On success the handle must eventually be
 * released with [`sps_pit_circuit_free`].
 */
enum SpsPitStatus sps_pit_circuit_parse(const char *text, struct SpsPitCircuit **out);

/**
 * Release a circuit handle. Null is a no-op.
 *
 * # Safety
 * `circuit` must be a handle from [`sps_pit_circuit_parse`] that has not
 * been freed already.
 */
void sps_pit_circuit_free(struct SpsPitCircuit *circuit);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be a string pointer returned by this library that has not been
 * freed already.
 */
void sps_pit_string_free(char *s);

/**
 * Render a circuit back into its canonical text format.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be valid. The returned
 * string is freed with [`sps_pit_string_free`].
 */
enum SpsPitStatus sps_pit_circuit_serialize(const struct SpsPitCircuit *circuit, char **out);

/**
 * Expand a circuit into its sorted monomial listing (oracle path; guarded
 * by the dense-size limit).
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be valid. The returned
 * string is freed with [`sps_pit_string_free`].
 */
enum SpsPitStatus sps_pit_circuit_expand(const struct SpsPitCircuit *circuit, char **out);

/**
 * Run a deterministic identity test (or the expansion oracle) and fill in
 * the report.
 *
 * # Safety
 * `circuit` must be a live handle and `report` a valid location. On
 * success the report's witness string, when non-null, must be freed with
 * [`sps_pit_string_free`].
 */
enum SpsPitStatus sps_pit_check(const struct SpsPitCircuit *circuit,
                                enum SpsPitMode mode,
                                struct SpsPitReport *report);

/**
 * Randomized evaluation check: writes 1 when some evaluation was nonzero,
 * 0 when all `trials` evaluations vanished. Advisory only.
 *
 * # Safety
 * `circuit` must be a live handle and `out_nonzero` a valid location.
 */
enum SpsPitStatus sps_pit_check_randomized(const struct SpsPitCircuit *circuit,
                                           uint32_t trials,
                                           uint64_t seed,
                                           int32_t *out_nonzero);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPS_PIT_H */
