//! C ABI for the stratoplan planning toolkit.
//!
//! Conventions: every fallible call returns an [`SpStatus`] code and writes
//! results through out-pointers; handles are opaque and must be released
//! with their matching `_free` function; string out-values are released
//! with [`sp_string_free`]. On any non-Ok status, [`sp_last_error_message`]
//! returns a human-readable description of the most recent failure on the
//! calling thread. No call panics across the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use libc::c_char;

use stratoplan::backhaul;
use stratoplan::coverage::{self, DeploymentPlan};
use stratoplan::dimensioning::{self, CavLevel, CavLevelProfile};
use stratoplan::fso::{self, FsoConfig, GeometryFamily};
use stratoplan::route::{self, CoverageMask, RoutePolyline};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpStatus {
    SpOk = 0,
    SpNullArgument = 1,
    SpInvalidUtf8 = 2,
    SpIoError = 3,
    SpParseError = 4,
    SpDomainError = 5,
    SpConnectivityError = 6,
    SpCalibrationError = 7,
    SpOutOfRange = 8,
    SpPanic = 9,
}

/// Link kind selector for rate queries.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpLinkKind {
    SpLinkH2g = 0,
    SpLinkH2h = 1,
}

/// Opaque handle to a loaded route polyline.
pub struct SpRoute(RoutePolyline);

/// Opaque handle to a deployment plan.
pub struct SpPlan(DeploymentPlan);

/// Opaque handle to a loaded FSO parameter set.
pub struct SpLinkModel(FsoConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of_route_error(e: &route::RouteError) -> SpStatus {
    match e {
        route::RouteError::Io { .. } => SpStatus::SpIoError,
        route::RouteError::Parse { .. } | route::RouteError::UnsupportedFormat(_) => {
            SpStatus::SpParseError
        }
        _ => SpStatus::SpDomainError,
    }
}

fn status_of_fso_error(e: &fso::FsoError) -> SpStatus {
    match e {
        fso::FsoError::Io { .. } => SpStatus::SpIoError,
        fso::FsoError::Parse { .. } => SpStatus::SpParseError,
        fso::FsoError::AnchorUnreachable { .. } => SpStatus::SpCalibrationError,
        _ => SpStatus::SpDomainError,
    }
}

/// Run `body` with panics converted to `SpPanic` so unwinding never
/// crosses the C boundary.
fn guard(body: impl FnOnce() -> SpStatus) -> SpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in stratoplan".into());
            set_error(message);
            SpStatus::SpPanic
        }
    }
}

unsafe fn path_from_c(ptr: *const c_char) -> Result<&'static Path, SpStatus> {
    if ptr.is_null() {
        set_error("null path argument");
        return Err(SpStatus::SpNullArgument);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            set_error("path is not valid UTF-8");
            Err(SpStatus::SpInvalidUtf8)
        }
    }
}

macro_rules! require_nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error(concat!("null argument: ", stringify!($ptr)));
            return SpStatus::SpNullArgument;
        }
    };
}

/// Message describing the most recent error on this thread, or null if none
/// occurred. The caller owns the string and releases it with
/// [`sp_string_free`].
#[no_mangle]
pub extern "C" fn sp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(text) => text.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a pointer returned by [`sp_last_error_message`] (or null)
/// that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load a route polyline from a GeoJSON (`.geojson`/`.json`) or CSV file.
///
/// # Safety
/// `path` must point to a NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn sp_route_load(path: *const c_char, out: *mut *mut SpRoute) -> SpStatus {
    require_nonnull!(out);
    let path = match path_from_c(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guard(|| match route::load_route(path) {
        Ok(route) => {
            *out = Box::into_raw(Box::new(SpRoute(route)));
            SpStatus::SpOk
        }
        Err(e) => {
            let status = status_of_route_error(&e);
            set_error(e.to_string());
            status
        }
    })
}

/// Total arc length of the route, km.
///
/// # Safety
/// `route` must be a live handle from [`sp_route_load`]; `out` must be
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_route_length_km(route: *const SpRoute, out: *mut f64) -> SpStatus {
    require_nonnull!(route);
    require_nonnull!(out);
    *out = (*route).0.length_km();
    SpStatus::SpOk
}

/// Release a route handle.
///
/// # Safety
/// `route` must come from [`sp_route_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sp_route_free(route: *mut SpRoute) {
    if !route.is_null() {
        drop(Box::from_raw(route));
    }
}

/// Plan a full-route footprint cover and return the plan handle.
///
/// # Safety
/// `route` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_plan_cover(
    route: *const SpRoute,
    radius_km: f64,
    altitude_km: f64,
    out: *mut *mut SpPlan,
) -> SpStatus {
    require_nonnull!(route);
    require_nonnull!(out);
    if !(radius_km > 0.0) || !(altitude_km > 0.0) {
        set_error("radius_km and altitude_km must be positive");
        return SpStatus::SpOutOfRange;
    }
    let route = &(*route).0;
    guard(|| {
        let target = CoverageMask::full(route.length_km());
        let plan = coverage::plan_cover(route, &target, radius_km, altitude_km);
        *out = Box::into_raw(Box::new(SpPlan(plan)));
        SpStatus::SpOk
    })
}

/// Number of platform nodes in the plan.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_plan_node_count(plan: *const SpPlan, out: *mut usize) -> SpStatus {
    require_nonnull!(plan);
    require_nonnull!(out);
    *out = (*plan).0.nodes.len();
    SpStatus::SpOk
}

/// Placement of one node: nadir latitude/longitude in degrees and arc
/// position along the route in km.
///
/// # Safety
/// `plan` must be a live handle; the out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_plan_node(
    plan: *const SpPlan,
    index: usize,
    out_lat_deg: *mut f64,
    out_lon_deg: *mut f64,
    out_nadir_s_km: *mut f64,
) -> SpStatus {
    require_nonnull!(plan);
    require_nonnull!(out_lat_deg);
    require_nonnull!(out_lon_deg);
    require_nonnull!(out_nadir_s_km);
    let nodes = &(*plan).0.nodes;
    match nodes.get(index) {
        Some(node) => {
            *out_lat_deg = node.nadir.lat_deg();
            *out_lon_deg = node.nadir.lon_deg();
            *out_nadir_s_km = node.nadir_s_km;
            SpStatus::SpOk
        }
        None => {
            set_error(format!(
                "node index {index} out of range (plan has {} nodes)",
                nodes.len()
            ));
            SpStatus::SpOutOfRange
        }
    }
}

/// Release a plan handle.
///
/// # Safety
/// `plan` must come from [`sp_plan_cover`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sp_plan_free(plan: *mut SpPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Load an FSO parameter config (terminal profiles plus atmosphere).
///
/// # Safety
/// `path` must point to a NUL-terminated string; `out` must be valid for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn sp_link_model_load(
    path: *const c_char,
    out: *mut *mut SpLinkModel,
) -> SpStatus {
    require_nonnull!(out);
    let path = match path_from_c(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guard(|| match fso::load_fso_config(path) {
        Ok(config) => {
            *out = Box::into_raw(Box::new(SpLinkModel(config)));
            SpStatus::SpOk
        }
        Err(e) => {
            let status = status_of_fso_error(&e);
            set_error(e.to_string());
            status
        }
    })
}

/// Release a link model handle.
///
/// # Safety
/// `model` must come from [`sp_link_model_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sp_link_model_free(model: *mut SpLinkModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

fn family_for(kind: SpLinkKind, altitude_km: f64) -> GeometryFamily {
    match kind {
        SpLinkKind::SpLinkH2g => GeometryFamily::Slant {
            platform_altitude_km: altitude_km,
            base_altitude_km: 0.0,
        },
        SpLinkKind::SpLinkH2h => GeometryFamily::Horizontal {
            altitude_km,
        },
    }
}

/// Achievable data rate in bit/s for one link. `distance_km` is the slant
/// range for gateway links and the horizontal separation for
/// platform-to-platform links; `altitude_km` is the platform altitude.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_link_rate_bps(
    model: *const SpLinkModel,
    kind: SpLinkKind,
    power_dbm: f64,
    distance_km: f64,
    altitude_km: f64,
    out: *mut f64,
) -> SpStatus {
    require_nonnull!(model);
    require_nonnull!(out);
    let config = &(*model).0;
    guard(|| {
        let label = match kind {
            SpLinkKind::SpLinkH2g => "h2g",
            SpLinkKind::SpLinkH2h => backhaul::H2H_TERMINAL_LABEL,
        };
        let mut params = match config.terminal(label) {
            Ok(p) => p.clone(),
            Err(e) => {
                set_error(e.to_string());
                return SpStatus::SpParseError;
            }
        };
        params.transmit_power_dbm = power_dbm;
        let (geometry, base_alt) = match family_for(kind, altitude_km).geometry_at(distance_km) {
            Ok(pair) => pair,
            Err(e) => {
                set_error(e.to_string());
                return SpStatus::SpOutOfRange;
            }
        };
        *out = fso::link_budget(&params, &geometry, &config.atmosphere, base_alt)
            .achievable_rate_bps;
        SpStatus::SpOk
    })
}

/// Bottleneck-limited per-cell rate in bit/s of a chain with one gateway
/// uplink at `h2g_slant_km` and `n_hops - 1` platform hops of `spacing_km`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_chain_per_cell_rate_bps(
    model: *const SpLinkModel,
    n_hops: u32,
    spacing_km: f64,
    h2g_slant_km: f64,
    altitude_km: f64,
    out: *mut f64,
) -> SpStatus {
    require_nonnull!(model);
    require_nonnull!(out);
    if n_hops == 0 {
        set_error("n_hops must be at least 1");
        return SpStatus::SpOutOfRange;
    }
    let config = &(*model).0;
    guard(|| {
        let h2g = match config.terminal("h2g") {
            Ok(p) => p,
            Err(e) => {
                set_error(e.to_string());
                return SpStatus::SpParseError;
            }
        };
        let h2h = match config.terminal(backhaul::H2H_TERMINAL_LABEL) {
            Ok(p) => p,
            Err(e) => {
                set_error(e.to_string());
                return SpStatus::SpParseError;
            }
        };
        match backhaul::chain_sweep(
            h2g,
            h2h,
            &config.atmosphere,
            n_hops,
            spacing_km,
            h2g_slant_km,
            altitude_km,
        ) {
            Ok(rows) => {
                *out = rows.last().expect("n_hops >= 1 yields a row").1;
                SpStatus::SpOk
            }
            Err(e) => {
                set_error(e.to_string());
                SpStatus::SpOutOfRange
            }
        }
    })
}

/// Default uplink demand in bit/s for an automation level (1..=5).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_uplink_demand_bps(level: u8, out: *mut f64) -> SpStatus {
    require_nonnull!(out);
    match CavLevel::new(level) {
        Ok(level) => {
            let profile = CavLevelProfile::default_for(level);
            *out = dimensioning::uplink_demand_bps(&profile);
            SpStatus::SpOk
        }
        Err(e) => {
            set_error(e.to_string());
            SpStatus::SpOutOfRange
        }
    }
}

/// One-way relay latency in ms over two slant paths.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sp_relay_latency_ms(
    slant_a_km: f64,
    slant_b_km: f64,
    out: *mut f64,
) -> SpStatus {
    require_nonnull!(out);
    if !(slant_a_km > 0.0) || !(slant_b_km > 0.0) {
        set_error("slant ranges must be positive");
        return SpStatus::SpOutOfRange;
    }
    *out = dimensioning::relay_latency(slant_a_km, slant_b_km).latency_ms;
    SpStatus::SpOk
}
