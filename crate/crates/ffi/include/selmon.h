#ifndef SELMON_H
#define SELMON_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SelmonStatus {
  SELMON_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SELMON_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not UTF-8.
   */
  SELMON_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON.
   */
  SELMON_STATUS_PARSE = 3,
  /**
   * Well-formed JSON of the wrong shape.
   */
  SELMON_STATUS_SCHEMA = 4,
  /**
   * Data violating a documented invariant, or an unknown argument value.
   */
  SELMON_STATUS_INVARIANT = 5,
  /**
   * A value of the wrong type.
   */
  SELMON_STATUS_TYPE = 6,
  /**
   * A cardinality or recursion-depth limit was hit.
   */
  SELMON_STATUS_LIMIT = 7,
  SELMON_STATUS_UNSUPPORTED = 8,
  SELMON_STATUS_IO = 9,
  /**
   * A Rust panic was caught at the boundary.
   */
  SELMON_STATUS_PANIC = 10,
} SelmonStatus;

/**
 * Opaque handle to a validated instance.
 */
typedef struct SelmonInstance SelmonInstance;

/**
 * Sizes for generated instances.
 */
typedef struct SelmonDnsBounds {
  /**
   * `|X|`, the number of moves.
   */
  uint32_t moves;
  /**
   * `|Rb|`, the number of counterexample values.
   */
  uint32_t counter;
  /**
   * Largest length bound `B`.
   */
  uint32_t b_max;
  /**
   * Lookahead of the generated window tables.
   */
  uint32_t lookahead;
  /**
   * Most members in each of `phi` and `q`.
   */
  uint32_t max_members;
} SelmonDnsBounds;

/**
 * Summary of one verification.
 */
typedef struct SelmonVerdict {
  /**
   * The premise implies the conclusion on this instance.
   */
  bool holds;
  bool premise;
  bool conclusion;
  /**
   * The premise holds and the context set is non-empty.
   */
  bool non_vacuous;
  /**
   * The length witness `N`.
   */
  uint64_t n;
  /**
   * Number of plays in the bar witness `t`.
   */
  uint64_t plays;
} SelmonVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The sizes used by the default random suite.
 */
struct SelmonDnsBounds selmon_dns_bounds_default(void);

/**
 * Parses and validates an instance from a NUL-terminated JSON document.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer to write to.
 */
enum SelmonStatus selmon_instance_from_json(const char *json, struct SelmonInstance **out);

/**
 * Generates instance `case_index` of the stream seeded by `seed`. The same
 * arguments always give the same instance.
 *
 * # Safety
 * `out` must be a valid pointer to write to.
 */
enum SelmonStatus selmon_instance_generate(uint64_t seed,
                                           uint64_t case_index,
                                           struct SelmonDnsBounds bounds,
                                           struct SelmonInstance **out);

/**
 * Serializes an instance to JSON. Free the result with
 * [`selmon_string_free`].
 *
 * # Safety
 * `inst` must come from this library and not be freed; `out` must be a
 * valid pointer to write to.
 */
enum SelmonStatus selmon_instance_to_json(const struct SelmonInstance *inst, char **out);

/**
 * Frees an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from this library and not already be freed.
 */
void selmon_instance_free(struct SelmonInstance *inst);

/**
 * Computes the witnesses of an instance and checks premise and conclusion.
 * `verdict` receives the summary. When `detail` is not null it receives the
 * full verdict as JSON, to be freed with [`selmon_string_free`].
 *
 * # Safety
 * `inst` must come from this library and not be freed; `verdict` must be a
 * valid pointer; `detail` must be null or a valid pointer.
 */
enum SelmonStatus selmon_verify_dns(const struct SelmonInstance *inst,
                                    struct SelmonVerdict *verdict,
                                    char **detail);

/**
 * Runs a suite (`laws`, `equiv`, `dns-random` or `all`) and writes the
 * JSON report to `report`. `bounds` is a preset name or a path to a JSON
 * bounds file; null means `default`. `passed` receives whether every check
 * passed. The report matches the command-line output byte for byte.
 *
 * # Safety
 * `command` must be a valid C string, `bounds` null or a valid C string,
 * and `report` and `passed` valid pointers.
 */
enum SelmonStatus selmon_run_suite(const char *command,
                                   uint64_t seed,
                                   const char *bounds,
                                   char **report,
                                   bool *passed);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not already be freed.
 */
void selmon_string_free(char *s);

/**
 * The message of the last failed call on this thread, or an empty string
 * after a successful one. Valid until the next call on this thread.
 */
const char *selmon_last_error_message(void);

/**
 * Library version as a static C string.
 */
const char *selmon_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SELMON_H */
