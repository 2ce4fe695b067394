#ifndef IQISEC_H
#define IQISEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IqisecStatus {
  IQISEC_STATUS_OK = 0,
  IQISEC_STATUS_NULL_POINTER = 1,
  IQISEC_STATUS_INVALID_ARGUMENT = 2,
  IQISEC_STATUS_CONFIG = 3,
  IQISEC_STATUS_NUMERIC = 4,
  IQISEC_STATUS_IO = 5,
  IQISEC_STATUS_PANIC = 6,
} IqisecStatus;

typedef enum IqisecScheme {
  IQISEC_SCHEME_RRS = 0,
  IQISEC_SCHEME_SRS = 1,
  IQISEC_SCHEME_ORS = 2,
} IqisecScheme;

// Which eavesdropped transmission an intercept query refers to.
typedef enum IqisecIpLink {
  IQISEC_IP_LINK_DIRECT = 0,
  IQISEC_IP_LINK_RELAY = 1,
} IqisecIpLink;

// Opaque scenario: a full configuration document.
typedef struct IqisecScenario IqisecScenario;

// Monte Carlo settings. `workers = 0` uses every core; results do not
// depend on it.
typedef struct IqisecMcOptions {
  uint64_t trials;
  uint64_t seed;
  size_t workers;
} IqisecMcOptions;

// Monte Carlo result: estimate and its standard error.
typedef struct IqisecEstimate {
  double p_hat;
  double std_error;
  uint64_t trials;
  uint64_t seed;
} IqisecEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *iqisec_last_error(void);

// Library version as a static string.
const char *iqisec_version(void);

// Default non-ideal scenario (10 dB beacon, two relays).
//
// # Safety
// `out` must be valid for writes.
enum IqisecStatus iqisec_scenario_new_default(struct IqisecScenario **out);

// Parses a JSON configuration document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum IqisecStatus iqisec_scenario_from_json(const char *json, struct IqisecScenario **out);

// Releases a scenario. Null is accepted.
//
// # Safety
// `scenario` must come from this library and not be used afterwards.
void iqisec_scenario_free(struct IqisecScenario *scenario);

// Sets the beacon power in dB.
//
// # Safety
// `scenario` must be a live handle.
enum IqisecStatus iqisec_scenario_set_pb_db(struct IqisecScenario *scenario, double pb_db);

// Sets the number of relays.
//
// # Safety
// `scenario` must be a live handle.
enum IqisecStatus iqisec_scenario_set_relays(struct IqisecScenario *scenario, size_t relays);

// Closed-form outage probability with `nodes` quadrature nodes (0 for the
// default).
//
// # Safety
// `scenario` must be a live handle; `out` must be valid for writes.
enum IqisecStatus iqisec_op_analytic(const struct IqisecScenario *scenario,
                                     enum IqisecScheme which,
                                     size_t nodes,
                                     double *out);

// Closed-form intercept probability.
//
// # Safety
// `scenario` must be a live handle; `out` must be valid for writes.
enum IqisecStatus iqisec_ip_analytic(const struct IqisecScenario *scenario,
                                     enum IqisecIpLink link,
                                     size_t nodes,
                                     double *out);

// Monte Carlo outage probability.
//
// # Safety
// `scenario` and `opts` must be valid; `out` must be valid for writes.
enum IqisecStatus iqisec_op_mc(const struct IqisecScenario *scenario,
                               enum IqisecScheme which,
                               const struct IqisecMcOptions *opts,
                               struct IqisecEstimate *out);

// Monte Carlo intercept probability.
//
// # Safety
// `scenario` and `opts` must be valid; `out` must be valid for writes.
enum IqisecStatus iqisec_ip_mc(const struct IqisecScenario *scenario,
                               enum IqisecIpLink link,
                               const struct IqisecMcOptions *opts,
                               struct IqisecEstimate *out);

// Modified Bessel function of the second kind, order one, for `x > 0`.
//
// # Safety
// `out` must be valid for writes.
enum IqisecStatus iqisec_bessel_k1(double x, double *out);

// Runs the experiment embedded in the scenario document and returns the
// CSV text. Release it with [`iqisec_string_free`].
//
// # Safety
// `scenario` must be a live handle; `out` must be valid for writes.
enum IqisecStatus iqisec_experiment_csv(const struct IqisecScenario *scenario, char **out);

// Releases a string returned by this library. Null is accepted.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void iqisec_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IQISEC_H */
