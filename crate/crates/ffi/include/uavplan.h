/* C interface for the uavplan planning engine. */

#ifndef UAVPLAN_H
#define UAVPLAN_H

/* Generated by cbindgen from uavplan-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible call.
 */
typedef enum uavplan_status {
  UAVPLAN_OK = 0,
  UAVPLAN_INVALID_ARGUMENT = 1,
  UAVPLAN_IO_ERROR = 2,
  UAVPLAN_VALIDATION_ERROR = 3,
  UAVPLAN_INFEASIBLE = 4,
  UAVPLAN_INTERNAL_ERROR = 5,
} uavplan_status;

/*
 Opaque scenario: parsed inputs plus the materialized placement problem.
 The placement result is computed once and reused across route calls.
 */
typedef struct uavplan_scenario uavplan_scenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds a scenario from a wind CSV, a layout CSV, and a TOML config.
 On success writes a handle into `out_scenario`.

 # Safety
 `wind_csv_path`, `layout_csv_path`, and `config_path` must be valid
 NUL-terminated strings; `out_scenario` must point to writable storage.
 */
enum uavplan_status uavplan_scenario_open(const char *wind_csv_path,
                                          const char *layout_csv_path,
                                          const char *config_path,
                                          struct uavplan_scenario **out_scenario);

/*
 Releases a scenario handle. NULL is a no-op.

 # Safety
 `scenario` must be a handle from `uavplan_scenario_open`, not yet freed.
 */
void uavplan_scenario_free(struct uavplan_scenario *scenario);

/*
 Last error message recorded on this scenario, or NULL. The pointer is
 owned by the scenario and valid until the next call on it.

 # Safety
 `scenario` must be a live handle.
 */
const char *uavplan_last_error(const struct uavplan_scenario *scenario);

/*
 Releases a string returned by this library. NULL is a no-op.

 # Safety
 `s` must have been returned by a `uavplan_*` call and not yet freed.
 */
void uavplan_string_free(char *s);

/*
 Runs the placement pipeline and returns the plan as a JSON document.
 The caller owns the string; free it with `uavplan_string_free`.

 # Safety
 `scenario` must be a live handle; `out_json` must be writable.
 */
enum uavplan_status uavplan_place_json(struct uavplan_scenario *scenario, char **out_json);

/*
 Routes one placed UAV under a steady wind (speed in m/s, meteorological
 direction in degrees) and returns the routes JSON document.

 # Safety
 `scenario` must be a live handle; `out_json` must be writable.
 */
enum uavplan_status uavplan_route_json(struct uavplan_scenario *scenario,
                                       int uav_index,
                                       double wind_speed_ms,
                                       double wind_dir_met_deg,
                                       char **out_json);

/*
 Total cruise power (W) of the scenario's airframe at the given airspeed.

 # Safety
 `scenario` must be a live handle; `out_watts` must be writable.
 */
enum uavplan_status uavplan_power_total(const struct uavplan_scenario *scenario,
                                        double airspeed_ms,
                                        double *out_watts);

/*
 Battery-limited endurance (seconds) at the given airspeed.

 # Safety
 `scenario` must be a live handle; `out_seconds` must be writable.
 */
enum uavplan_status uavplan_endurance_s(const struct uavplan_scenario *scenario,
                                        double airspeed_ms,
                                        double *out_seconds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UAVPLAN_H */
