#ifndef RELAYSEL_H
#define RELAYSEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RelayselConvention {
  RELAYSEL_CONVENTION_DERIVED = 0,
  RELAYSEL_CONVENTION_PAPER = 1,
} RelayselConvention;

typedef enum RelayselMetric {
  RELAYSEL_METRIC_OUTAGE = 0,
  RELAYSEL_METRIC_ASER = 1,
  RELAYSEL_METRIC_CAPACITY = 2,
} RelayselMetric;

typedef enum RelayselStatus {
  RELAYSEL_STATUS_OK = 0,
  RELAYSEL_STATUS_NULL_POINTER = 1,
  RELAYSEL_STATUS_INVALID_ARGUMENT = 2,
  RELAYSEL_STATUS_CONFIG_ERROR = 3,
  RELAYSEL_STATUS_NUMERICAL_ERROR = 4,
  RELAYSEL_STATUS_PANIC = 5,
} RelayselStatus;

/**
 * Opaque system configuration.
 */
typedef struct RelayselConfig RelayselConfig;

/**
 * Analytic value with its series diagnostics.
 */
typedef struct RelayselResult {
  double value;
  uint64_t series_terms;
  double condition_estimate;
} RelayselResult;

/**
 * Monte-Carlo mean and standard error.
 */
typedef struct RelayselEstimate {
  double mean;
  double std_error;
  uint64_t trials;
} RelayselEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none failed.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *relaysel_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *relaysel_version(void);

/**
 * `relays` identical relays with unit-variance estimates, BPSK and `R = 1`.
 *
 * # Safety
 * `out` must be null or point to writable storage for one pointer.
 */
enum RelayselStatus relaysel_config_new_symmetric(uint32_t relays,
                                                  double power_db,
                                                  double rho_e,
                                                  double rho_f,
                                                  struct RelayselConfig **out);

/**
 * Parse a JSON configuration document.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` as in
 * [`relaysel_config_new_symmetric`].
 */
enum RelayselStatus relaysel_config_from_json(const char *json, struct RelayselConfig **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `cfg` must be null or a handle from this library that has not been freed.
 */
void relaysel_config_free(struct RelayselConfig *cfg);

/**
 * # Safety
 * `cfg` must be null or a live handle.
 */
enum RelayselStatus relaysel_config_set_power_db(struct RelayselConfig *cfg, double power_db);

/**
 * # Safety
 * `cfg` must be null or a live handle.
 */
enum RelayselStatus relaysel_config_set_convention(struct RelayselConfig *cfg,
                                                   enum RelayselConvention convention);

/**
 * # Safety
 * `cfg` must be null or a live handle; `out` null or writable.
 */
enum RelayselStatus relaysel_config_relays(const struct RelayselConfig *cfg, uint32_t *out);

/**
 * End-to-end outage probability.
 *
 * # Safety
 * `cfg` must be null or a live handle; `out` null or writable.
 */
enum RelayselStatus relaysel_outage(const struct RelayselConfig *cfg, struct RelayselResult *out);

/**
 * Average symbol error rate; `n_a = 0` uses the exact Q function, otherwise
 * the exponential approximation of that order.
 *
 * # Safety
 * `cfg` must be null or a live handle; `out` null or writable.
 */
enum RelayselStatus relaysel_aser(const struct RelayselConfig *cfg,
                                  uint32_t n_a,
                                  struct RelayselResult *out);

/**
 * Average of the capacity lower bound, bits/s/Hz.
 *
 * # Safety
 * `cfg` must be null or a live handle; `out` null or writable.
 */
enum RelayselStatus relaysel_capacity(const struct RelayselConfig *cfg, struct RelayselResult *out);

/**
 * Probability that exactly the relays in bit mask `set` decode.
 *
 * # Safety
 * `cfg` must be null or a live handle; `out` null or writable.
 */
enum RelayselStatus relaysel_decoding_set_probability(const struct RelayselConfig *cfg,
                                                      uint32_t set,
                                                      double *out);

/**
 * Monte-Carlo estimate of `metric`. Deterministic in `seed`.
 *
 * # Safety
 * `cfg` must be null or a live handle; `out` null or writable.
 */
enum RelayselStatus relaysel_simulate(const struct RelayselConfig *cfg,
                                      enum RelayselMetric metric,
                                      uint64_t trials,
                                      uint64_t seed,
                                      struct RelayselEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELAYSEL_H */
