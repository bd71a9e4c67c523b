//! Plan, route, range, and trace documents, written as canonical JSON:
//! keys sorted, floats at fixed 6-decimal precision, so identical inputs
//! produce byte-identical files.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("refusing to write an empty document to disk")]
    EmptyDocument,
    #[error("document contains a non-finite number under `{0}`")]
    NonFinite(String),
    #[error("document contains a null under `{0}` (non-finite floats serialize as null)")]
    UnsupportedNull(String),
    #[error("serialization failed: {0}")]
    Serde(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A document that knows when it carries no payload.
pub trait Document: Serialize {
    fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSettings {
    pub u_max_ms: f64,
    pub u_wind_ms: f64,
    pub p: usize,
    pub d_m: f64,
    pub t_max_s: f64,
    pub mu: usize,
    pub epsilon_v_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanTurbine {
    pub code: String,
    pub lon_deg: f64,
    pub lat_deg: f64,
    pub x_m: f64,
    pub y_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanUav {
    /// Candidate index, stable across the pipeline.
    pub index: usize,
    pub at_code: String,
    pub x_m: f64,
    pub y_m: f64,
    pub turbine_codes: Vec<String>,
    /// Indices of linked active UAVs.
    pub link_indices: Vec<usize>,
}

/// The placement result: every active UAV with its assignments and links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema: String,
    pub settings: PlanSettings,
    pub ref_lat_deg: f64,
    pub turbines: Vec<PlanTurbine>,
    pub uavs: Vec<PlanUav>,
    pub steps: usize,
    pub active_count: usize,
}

pub const PLAN_SCHEMA: &str = "uavplan/plan/v1";
pub const ROUTES_SCHEMA: &str = "uavplan/routes/v1";
pub const RANGE_SCHEMA: &str = "uavplan/range/v1";
pub const TRACE_SCHEMA: &str = "uavplan/trace/v1";
pub const STATS_SCHEMA: &str = "uavplan/stats/v1";

impl Document for PlanDocument {
    fn is_empty(&self) -> bool {
        self.turbines.is_empty() || self.uavs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegRecord {
    pub from: String,
    pub to: String,
    pub distance_m: f64,
    pub time_s: f64,
    pub groundspeed_ms: f64,
    pub airspeed_ms: f64,
    pub theta_sw_rad: f64,
    pub theta_sv_rad: f64,
    pub tail_wind: bool,
    pub airspeed_over_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRecord {
    pub codes: Vec<String>,
    pub duration_s: f64,
    /// Minutes, the reporting unit for flight times.
    pub duration_min: f64,
    pub legs: Vec<LegRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutesDocument {
    pub schema: String,
    pub uav_index: usize,
    pub at_code: String,
    pub wind_speed_ms: f64,
    pub wind_dir_met_deg: f64,
    pub m: usize,
    pub total_s: f64,
    pub total_min: f64,
    pub routes: Vec<RouteRecord>,
}

impl Document for RoutesDocument {
    fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeDiscRecord {
    pub segment: usize,
    pub wind_x_ms: f64,
    pub wind_y_ms: f64,
    pub center_x_m: f64,
    pub center_y_m: f64,
    pub radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeDocument {
    pub schema: String,
    pub at_code: String,
    pub anchor_x_m: f64,
    pub anchor_y_m: f64,
    pub rho_m: f64,
    pub mu: usize,
    pub epsilon_v_ms: f64,
    pub discs: Vec<RangeDiscRecord>,
}

impl Document for RangeDocument {
    fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceUav {
    pub index: usize,
    pub turbine_codes: Vec<String>,
    pub link_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub active: Vec<TraceUav>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub schema: String,
    pub steps: Vec<TraceStep>,
}

impl Document for TraceDocument {
    fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Serializes any value to canonical JSON text.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String, EmitError> {
    let tree = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&tree, 0, "$", &mut out)?;
    out.push('\n');
    Ok(out)
}

fn write_value(value: &Value, indent: usize, path: &str, out: &mut String) -> Result<(), EmitError> {
    match value {
        // The document schemas carry no nulls; a null here is a NaN or
        // infinity that serde_json folded during conversion.
        Value::Null => return Err(EmitError::UnsupportedNull(path.to_string())),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let f = n.as_f64().ok_or_else(|| EmitError::NonFinite(path.to_string()))?;
                if !f.is_finite() {
                    return Err(EmitError::NonFinite(path.to_string()));
                }
                let f = if f == 0.0 { 0.0 } else { f }; // fold -0.0
                let _ = write!(out, "{f:.6}");
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                    write_value(item, indent + 1, &format!("{path}[{i}]"), out)?;
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
            } else {
                let mut keys: Vec<&String> = map.keys().collect();
                keys.sort();
                out.push('{');
                for (i, key) in keys.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                    let _ = write!(out, "{}: ", serde_json::to_string(key).expect("key serializes"));
                    write_value(&map[*key], indent + 1, &format!("{path}.{key}"), out)?;
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }
    Ok(())
}

/// Writes a document as canonical JSON, refusing empty payloads.
pub fn emit_document<D: Document>(doc: &D, path: &Path) -> Result<(), EmitError> {
    if doc.is_empty() {
        return Err(EmitError::EmptyDocument);
    }
    let text = canonical_json(doc)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads a canonical JSON document back.
pub fn parse_document<D: DeserializeOwned>(path: &Path) -> Result<D, EmitError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
