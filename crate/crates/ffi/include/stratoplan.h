/* C ABI for the stratoplan planning toolkit. */

#ifndef STRATOPLAN_H
#define STRATOPLAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum SpStatus {
  SP_OK = 0,
  SP_NULL_ARGUMENT = 1,
  SP_INVALID_UTF8 = 2,
  SP_IO_ERROR = 3,
  SP_PARSE_ERROR = 4,
  SP_DOMAIN_ERROR = 5,
  SP_CONNECTIVITY_ERROR = 6,
  SP_CALIBRATION_ERROR = 7,
  SP_OUT_OF_RANGE = 8,
  SP_PANIC = 9,
} SpStatus;

/**
 * Link kind selector for rate queries.
 */
typedef enum SpLinkKind {
  SP_LINK_H2G = 0,
  SP_LINK_H2H = 1,
} SpLinkKind;

/**
 * Opaque handle to a loaded FSO parameter set.
 */
typedef struct SpLinkModel SpLinkModel;

/**
 * Opaque handle to a deployment plan.
 */
typedef struct SpPlan SpPlan;

/**
 * Opaque handle to a loaded route polyline.
 */
typedef struct SpRoute SpRoute;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread, or null if none
 * occurred. The caller owns the string and releases it with
 * [`sp_string_free`].
 */
char *sp_last_error_message(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer returned by [`sp_last_error_message`] (or null)
 * that has not been freed already.
 */
void sp_string_free(char *s);

/**
 * Load a route polyline from a GeoJSON (`.geojson`/`.json`) or CSV file.
 *
 * # Safety
 * `path` must point to a NUL-terminated string; `out` must be a valid
 * pointer to receive the handle.
 */
enum SpStatus sp_route_load(const char *path, struct SpRoute **out);

/**
 * Total arc length of the route, km.
 *
 * # Safety
 * `route` must be a live handle from [`sp_route_load`]; `out` must be
 * valid for a write.
 */
enum SpStatus sp_route_length_km(const struct SpRoute *route, double *out);

/**
 * Release a route handle.
 *
 * # Safety
 * `route` must come from [`sp_route_load`] and not be freed twice.
 */
void sp_route_free(struct SpRoute *route);

/**
 * Plan a full-route footprint cover and return the plan handle.
 *
 * # Safety
 * `route` must be a live handle; `out` must be valid for a write.
 */
enum SpStatus sp_plan_cover(const struct SpRoute *route,
                            double radius_km,
                            double altitude_km,
                            struct SpPlan **out);

/**
 * Number of platform nodes in the plan.
 *
 * # Safety
 * `plan` must be a live handle; `out` must be valid for a write.
 */
enum SpStatus sp_plan_node_count(const struct SpPlan *plan, uintptr_t *out);

/**
 * Placement of one node: nadir latitude/longitude in degrees and arc
 * position along the route in km.
 *
 * # Safety
 * `plan` must be a live handle; the out-pointers must be valid for writes.
 */
enum SpStatus sp_plan_node(const struct SpPlan *plan,
                           uintptr_t index,
                           double *out_lat_deg,
                           double *out_lon_deg,
                           double *out_nadir_s_km);

/**
 * Release a plan handle.
 *
 * # Safety
 * `plan` must come from [`sp_plan_cover`] and not be freed twice.
 */
void sp_plan_free(struct SpPlan *plan);

/**
 * Load an FSO parameter config (terminal profiles plus atmosphere).
 *
 * # Safety
 * `path` must point to a NUL-terminated string; `out` must be valid for a
 * write.
 */
enum SpStatus sp_link_model_load(const char *path, struct SpLinkModel **out);

/**
 * Release a link model handle.
 *
 * # Safety
 * `model` must come from [`sp_link_model_load`] and not be freed twice.
 */
void sp_link_model_free(struct SpLinkModel *model);

/**
 * Achievable data rate in bit/s for one link. `distance_km` is the slant
 * range for gateway links and the horizontal separation for
 * platform-to-platform links; `altitude_km` is the platform altitude.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for a write.
 */
enum SpStatus sp_link_rate_bps(const struct SpLinkModel *model,
                               enum SpLinkKind kind,
                               double power_dbm,
                               double distance_km,
                               double altitude_km,
                               double *out);

/**
 * Bottleneck-limited per-cell rate in bit/s of a chain with one gateway
 * uplink at `h2g_slant_km` and `n_hops - 1` platform hops of `spacing_km`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for a write.
 */
enum SpStatus sp_chain_per_cell_rate_bps(const struct SpLinkModel *model,
                                         uint32_t n_hops,
                                         double spacing_km,
                                         double h2g_slant_km,
                                         double altitude_km,
                                         double *out);

/**
 * Default uplink demand in bit/s for an automation level (1..=5).
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SpStatus sp_uplink_demand_bps(uint8_t level, double *out);

/**
 * One-way relay latency in ms over two slant paths.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SpStatus sp_relay_latency_ms(double slant_a_km, double slant_b_km, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRATOPLAN_H */
