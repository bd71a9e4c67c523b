//! C ABI over the planning engine.
//!
//! The surface is a scenario handle (wind + layout + config, loaded once)
//! plus calls that return JSON documents as C strings or plain numbers.
//! Every call reports a `uavplan_status`; string and handle outputs are
//! owned by the caller and released through the matching `_free` function.

// C-facing names keep C conventions.
#![allow(non_camel_case_types)]

use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use uavplan_core::endurance::{max_flight_time, power};
use uavplan_core::io::config::PlannerConfig;
use uavplan_core::io::plan::{
    canonical_json, LegRecord, PlanDocument, PlanSettings, PlanTurbine, PlanUav, RouteRecord,
    RoutesDocument, PLAN_SCHEMA, ROUTES_SCHEMA,
};
use uavplan_core::io::project::{centroid_latitude, mercator_project};
use uavplan_core::io::records::{parse_layout_csv, parse_wind_csv, TurbineRecord};
use uavplan_core::placement::{plan_placement, PlacementError, PlacementProblem, Turbine};
use uavplan_core::range::{build_range, choose_epsilon_v, wind_stats};
use uavplan_core::routing::{
    build_cost_matrix, held_karp_path, split_by_endurance, RouteNode, RoutingError,
};
use uavplan_core::wind::{wind_from_met, Point2D, WindSample};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum uavplan_status {
    UAVPLAN_OK = 0,
    UAVPLAN_INVALID_ARGUMENT = 1,
    UAVPLAN_IO_ERROR = 2,
    UAVPLAN_VALIDATION_ERROR = 3,
    UAVPLAN_INFEASIBLE = 4,
    UAVPLAN_INTERNAL_ERROR = 5,
}

use uavplan_status::*;

/// Opaque scenario: parsed inputs plus the materialized placement problem.
/// The placement result is computed once and reused across route calls.
pub struct uavplan_scenario {
    config: PlannerConfig,
    samples: Vec<WindSample>,
    records: Vec<TurbineRecord>,
    turbines: Vec<Turbine>,
    ref_lat_deg: f64,
    epsilon_v: f64,
    plan_cache: Option<PlanDocument>,
    last_error: Option<CString>,
}

fn set_error(scenario: &mut uavplan_scenario, message: String) {
    scenario.last_error = CString::new(message).ok();
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn leak_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Builds a scenario from a wind CSV, a layout CSV, and a TOML config.
/// On success writes a handle into `out_scenario`.
///
/// # Safety
/// `wind_csv_path`, `layout_csv_path`, and `config_path` must be valid
/// NUL-terminated strings; `out_scenario` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn uavplan_scenario_open(
    wind_csv_path: *const c_char,
    layout_csv_path: *const c_char,
    config_path: *const c_char,
    out_scenario: *mut *mut uavplan_scenario,
) -> uavplan_status {
    if out_scenario.is_null() {
        return UAVPLAN_INVALID_ARGUMENT;
    }
    *out_scenario = std::ptr::null_mut();
    let (Some(wind_path), Some(layout_path), Some(config_path)) =
        (str_arg(wind_csv_path), str_arg(layout_csv_path), str_arg(config_path))
    else {
        return UAVPLAN_INVALID_ARGUMENT;
    };

    let result = catch_unwind(|| -> Result<uavplan_scenario, (uavplan_status, String)> {
        let config = PlannerConfig::load(Path::new(config_path))
            .map_err(|e| (UAVPLAN_IO_ERROR, e.to_string()))?;
        config.validate().map_err(|e| (UAVPLAN_VALIDATION_ERROR, e.to_string()))?;

        let wind_file =
            File::open(wind_path).map_err(|e| (UAVPLAN_IO_ERROR, format!("{wind_path}: {e}")))?;
        let parsed = parse_wind_csv(wind_file).map_err(|e| (UAVPLAN_IO_ERROR, e.to_string()))?;
        let layout_file = File::open(layout_path)
            .map_err(|e| (UAVPLAN_IO_ERROR, format!("{layout_path}: {e}")))?;
        let records =
            parse_layout_csv(layout_file).map_err(|e| (UAVPLAN_VALIDATION_ERROR, e.to_string()))?;

        let ref_lat_deg =
            config.projection.ref_lat_deg.unwrap_or_else(|| centroid_latitude(&records));
        let turbines = mercator_project(&records, ref_lat_deg)
            .map_err(|e| (UAVPLAN_VALIDATION_ERROR, e.to_string()))?;

        let samples = parsed.to_samples();
        let stats = wind_stats(&samples).map_err(|e| (UAVPLAN_VALIDATION_ERROR, e.to_string()))?;
        let spec = config.uav_spec();
        let epsilon_v =
            choose_epsilon_v(&stats, spec.u_wind, config.range.gust_factor, config.epsilon_mode());

        Ok(uavplan_scenario {
            config,
            samples,
            records,
            turbines,
            ref_lat_deg,
            epsilon_v,
            plan_cache: None,
            last_error: None,
        })
    });

    match result {
        Ok(Ok(scenario)) => {
            *out_scenario = Box::into_raw(Box::new(scenario));
            UAVPLAN_OK
        }
        Ok(Err((status, _))) => status,
        Err(_) => UAVPLAN_INTERNAL_ERROR,
    }
}

/// Releases a scenario handle. NULL is a no-op.
///
/// # Safety
/// `scenario` must be a handle from `uavplan_scenario_open`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uavplan_scenario_free(scenario: *mut uavplan_scenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Last error message recorded on this scenario, or NULL. The pointer is
/// owned by the scenario and valid until the next call on it.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn uavplan_last_error(scenario: *const uavplan_scenario) -> *const c_char {
    match scenario.as_ref().and_then(|s| s.last_error.as_ref()) {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by a `uavplan_*` call and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uavplan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn plan_document(scenario: &mut uavplan_scenario) -> Result<&PlanDocument, (uavplan_status, String)> {
    if scenario.plan_cache.is_none() {
        scenario.plan_cache = Some(build_plan_document(scenario)?);
    }
    Ok(scenario.plan_cache.as_ref().expect("just filled"))
}

fn build_plan_document(scenario: &uavplan_scenario) -> Result<PlanDocument, (uavplan_status, String)> {
    let config = &scenario.config;
    let spec = config.uav_spec();
    let ranges = scenario
        .turbines
        .iter()
        .map(|t| {
            build_range(
                t.position,
                &scenario.samples,
                config.range.mu,
                scenario.epsilon_v,
                spec.t_max,
                spec.u_max,
            )
        })
        .collect();
    let problem = PlacementProblem {
        turbines: scenario.turbines.clone(),
        ranges,
        p: spec.p,
        d: spec.d,
    };
    let (state, _) = plan_placement(&problem).map_err(|e| {
        let status = match e {
            PlacementError::Validation(_) => UAVPLAN_VALIDATION_ERROR,
            _ => UAVPLAN_INFEASIBLE,
        };
        (status, e.to_string())
    })?;

    let active: Vec<usize> = (0..state.candidate_count()).filter(|&i| state.active[i]).collect();
    Ok(PlanDocument {
        schema: PLAN_SCHEMA.into(),
        settings: PlanSettings {
            u_max_ms: spec.u_max,
            u_wind_ms: spec.u_wind,
            p: spec.p,
            d_m: spec.d,
            t_max_s: spec.t_max,
            mu: config.range.mu,
            epsilon_v_ms: scenario.epsilon_v,
        },
        ref_lat_deg: scenario.ref_lat_deg,
        turbines: scenario
            .turbines
            .iter()
            .zip(scenario.records.iter())
            .map(|(t, r)| PlanTurbine {
                code: t.code.clone(),
                lon_deg: r.lon_deg,
                lat_deg: r.lat_deg,
                x_m: t.position.x,
                y_m: t.position.y,
            })
            .collect(),
        uavs: active
            .iter()
            .map(|&i| PlanUav {
                index: i,
                at_code: problem.turbines[i].code.clone(),
                x_m: state.positions[i].x,
                y_m: state.positions[i].y,
                turbine_codes: state
                    .assigned_turbines(i)
                    .into_iter()
                    .map(|k| problem.turbines[k].code.clone())
                    .collect(),
                link_indices: active
                    .iter()
                    .copied()
                    .filter(|&j| j != i && state.links[i][j])
                    .collect(),
            })
            .collect(),
        steps: state.step,
        active_count: state.active_count(),
    })
}

/// Runs the placement pipeline and returns the plan as a JSON document.
/// The caller owns the string; free it with `uavplan_string_free`.
///
/// # Safety
/// `scenario` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavplan_place_json(
    scenario: *mut uavplan_scenario,
    out_json: *mut *mut c_char,
) -> uavplan_status {
    let Some(scenario) = scenario.as_mut() else {
        return UAVPLAN_INVALID_ARGUMENT;
    };
    if out_json.is_null() {
        return UAVPLAN_INVALID_ARGUMENT;
    }
    *out_json = std::ptr::null_mut();
    let result = catch_unwind(AssertUnwindSafe(|| {
        plan_document(scenario).and_then(|doc| {
            canonical_json(doc).map_err(|e| (UAVPLAN_INTERNAL_ERROR, e.to_string()))
        })
    }));
    match result {
        Ok(Ok(json)) => {
            *out_json = leak_string(json);
            UAVPLAN_OK
        }
        Ok(Err((status, message))) => {
            set_error(scenario, message);
            status
        }
        Err(_) => UAVPLAN_INTERNAL_ERROR,
    }
}

/// Routes one placed UAV under a steady wind (speed in m/s, meteorological
/// direction in degrees) and returns the routes JSON document.
///
/// # Safety
/// `scenario` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavplan_route_json(
    scenario: *mut uavplan_scenario,
    uav_index: c_int,
    wind_speed_ms: c_double,
    wind_dir_met_deg: c_double,
    out_json: *mut *mut c_char,
) -> uavplan_status {
    let Some(scenario) = scenario.as_mut() else {
        return UAVPLAN_INVALID_ARGUMENT;
    };
    if out_json.is_null() || uav_index < 0 {
        return UAVPLAN_INVALID_ARGUMENT;
    }
    *out_json = std::ptr::null_mut();

    let result = catch_unwind(AssertUnwindSafe(|| -> Result<String, (uavplan_status, String)> {
        let plan = plan_document(scenario)?;
        let uav = plan
            .uavs
            .iter()
            .find(|u| u.index == uav_index as usize)
            .ok_or((UAVPLAN_INVALID_ARGUMENT, format!("no active UAV {uav_index}")))?;

        let wind = wind_from_met(wind_speed_ms, wind_dir_met_deg.to_radians())
            .map_err(|e| (UAVPLAN_INVALID_ARGUMENT, e.to_string()))?;
        let find = |code: &str| {
            plan.turbines
                .iter()
                .find(|t| t.code == code)
                .map(|t| Point2D::new(t.x_m, t.y_m))
                .ok_or((UAVPLAN_INTERNAL_ERROR, format!("plan lost turbine {code}")))
        };
        let start = RouteNode { code: uav.at_code.clone(), position: find(&uav.at_code)? };
        let mut interiors = Vec::new();
        for code in &uav.turbine_codes {
            if *code != uav.at_code {
                interiors.push(RouteNode { code: code.clone(), position: find(code)? });
            }
        }

        let doc = if interiors.is_empty() {
            RoutesDocument {
                schema: ROUTES_SCHEMA.into(),
                uav_index: uav.index,
                at_code: uav.at_code.clone(),
                wind_speed_ms,
                wind_dir_met_deg,
                m: 1,
                total_s: 0.0,
                total_min: 0.0,
                routes: vec![RouteRecord {
                    codes: vec![uav.at_code.clone(), uav.at_code.clone()],
                    duration_s: 0.0,
                    duration_min: 0.0,
                    legs: Vec::new(),
                }],
            }
        } else {
            let map_err = |e: RoutingError| (UAVPLAN_INFEASIBLE, e.to_string());
            let costs = build_cost_matrix(
                &start,
                &interiors,
                wind,
                plan.settings.u_max_ms,
                plan.settings.u_wind_ms,
            )
            .map_err(map_err)?;
            let tour = held_karp_path(&costs).map_err(map_err)?;
            let route_plan =
                split_by_endurance(&tour.path, &costs, plan.settings.t_max_s).map_err(map_err)?;
            RoutesDocument {
                schema: ROUTES_SCHEMA.into(),
                uav_index: uav.index,
                at_code: uav.at_code.clone(),
                wind_speed_ms,
                wind_dir_met_deg,
                m: route_plan.route_count(),
                total_s: route_plan.total_duration,
                total_min: route_plan.total_duration / 60.0,
                routes: route_plan
                    .routes
                    .iter()
                    .map(|route| RouteRecord {
                        codes: route.nodes.iter().map(|&n| costs.nodes[n].code.clone()).collect(),
                        duration_s: route.duration,
                        duration_min: route.duration / 60.0,
                        legs: route
                            .nodes
                            .windows(2)
                            .map(|w| {
                                let leg = costs.kinematics[w[0]][w[1]]
                                    .expect("off-diagonal legs resolved");
                                LegRecord {
                                    from: costs.nodes[w[0]].code.clone(),
                                    to: costs.nodes[w[1]].code.clone(),
                                    distance_m: leg.time * leg.groundspeed,
                                    time_s: leg.time,
                                    groundspeed_ms: leg.groundspeed,
                                    airspeed_ms: leg.airspeed,
                                    theta_sw_rad: leg.theta_sw,
                                    theta_sv_rad: leg.theta_sv,
                                    tail_wind: leg.theta_sw <= std::f64::consts::PI / 2.0,
                                    airspeed_over_limit: leg.airspeed_over_limit,
                                }
                            })
                            .collect(),
                    })
                    .collect(),
            }
        };
        canonical_json(&doc).map_err(|e| (UAVPLAN_INTERNAL_ERROR, e.to_string()))
    }));

    match result {
        Ok(Ok(json)) => {
            *out_json = leak_string(json);
            UAVPLAN_OK
        }
        Ok(Err((status, message))) => {
            set_error(scenario, message);
            status
        }
        Err(_) => UAVPLAN_INTERNAL_ERROR,
    }
}

/// Total cruise power (W) of the scenario's airframe at the given airspeed.
///
/// # Safety
/// `scenario` must be a live handle; `out_watts` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavplan_power_total(
    scenario: *const uavplan_scenario,
    airspeed_ms: c_double,
    out_watts: *mut c_double,
) -> uavplan_status {
    let Some(scenario) = scenario.as_ref() else {
        return UAVPLAN_INVALID_ARGUMENT;
    };
    if out_watts.is_null() || !(airspeed_ms >= 0.0) {
        return UAVPLAN_INVALID_ARGUMENT;
    }
    *out_watts = power(airspeed_ms, &scenario.config.airframe).total_w;
    UAVPLAN_OK
}

/// Battery-limited endurance (seconds) at the given airspeed.
///
/// # Safety
/// `scenario` must be a live handle; `out_seconds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavplan_endurance_s(
    scenario: *const uavplan_scenario,
    airspeed_ms: c_double,
    out_seconds: *mut c_double,
) -> uavplan_status {
    let Some(scenario) = scenario.as_ref() else {
        return UAVPLAN_INVALID_ARGUMENT;
    };
    if out_seconds.is_null() || !(airspeed_ms >= 0.0) {
        return UAVPLAN_INVALID_ARGUMENT;
    }
    *out_seconds = max_flight_time(&scenario.config.airframe, airspeed_ms);
    UAVPLAN_OK
}
