//! Planner configuration: UAV limits, airframe constants, range
//! discretization, and projection reference. Loaded from TOML.

use crate::endurance::{max_flight_time, AirframeParams, ParamInconsistency};
use crate::range::EpsilonMode;
use crate::uav::UavSpec;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config field `{field}` must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("range.mu must be at least 4, got {0}")]
    MuTooSmall(usize),
    #[error("epsilon mode `override` requires range.epsilon_v_ms")]
    MissingEpsilonValue,
    #[error("airframe: {0}")]
    Airframe(#[from] crate::endurance::AirframeError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavConfig {
    pub u_max_ms: f64,
    pub u_wind_ms: f64,
    pub p: usize,
    pub d_m: f64,
    /// Sortie time budget in minutes. Absent: derived from the airframe's
    /// battery and cruise power at `u_max_ms`.
    pub t_max_min: Option<f64>,
}

impl Default for UavConfig {
    fn default() -> Self {
        Self { u_max_ms: 16.0, u_wind_ms: 15.0, p: 5, d_m: 5000.0, t_max_min: Some(20.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    /// Compass segments for the range envelope.
    pub mu: usize,
    /// override | floor | nearest.
    pub epsilon_mode: String,
    pub epsilon_v_ms: Option<f64>,
    /// Assumed gust-to-mean ratio for the floor/nearest rules.
    pub gust_factor: f64,
    /// Rounding granularity (m/s) for the floor/nearest rules.
    pub granularity_ms: f64,
}

impl Default for RangeConfig {
    fn default() -> Self {
        Self {
            mu: 36,
            epsilon_mode: "override".into(),
            epsilon_v_ms: Some(8.0),
            gust_factor: 2.0,
            granularity_ms: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionConfig {
    /// Absent: the layout's centroid latitude.
    pub ref_lat_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    pub uav: UavConfig,
    pub airframe: AirframeParams,
    pub range: RangeConfig,
    pub projection: ProjectionConfig,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            uav: UavConfig::default(),
            airframe: AirframeParams::default(),
            range: RangeConfig::default(),
            projection: ProjectionConfig::default(),
        }
    }
}

impl PlannerConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let config: PlannerConfig = toml::from_str(text)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Positivity and structural checks; airframe inconsistencies come back
    /// as warnings.
    pub fn validate(&self) -> Result<Vec<ParamInconsistency>, ConfigError> {
        let positives: [(&'static str, f64); 4] = [
            ("uav.u_max_ms", self.uav.u_max_ms),
            ("uav.u_wind_ms", self.uav.u_wind_ms),
            ("uav.d_m", self.uav.d_m),
            ("range.gust_factor", self.range.gust_factor),
        ];
        for (field, value) in positives {
            if !(value > 0.0) {
                return Err(ConfigError::NonPositive { field, value });
            }
        }
        if let Some(t) = self.uav.t_max_min {
            if !(t > 0.0) {
                return Err(ConfigError::NonPositive { field: "uav.t_max_min", value: t });
            }
        }
        if self.uav.p == 0 {
            return Err(ConfigError::NonPositive { field: "uav.p", value: 0.0 });
        }
        if self.range.mu < 4 {
            return Err(ConfigError::MuTooSmall(self.range.mu));
        }
        if self.range.epsilon_mode == "override" && self.range.epsilon_v_ms.is_none() {
            return Err(ConfigError::MissingEpsilonValue);
        }
        Ok(self.airframe.validate()?)
    }

    /// Sortie budget in seconds: the explicit override, else the
    /// battery-limited endurance at full speed.
    pub fn t_max_s(&self) -> f64 {
        match self.uav.t_max_min {
            Some(minutes) => minutes * 60.0,
            None => max_flight_time(&self.airframe, self.uav.u_max_ms),
        }
    }

    pub fn uav_spec(&self) -> UavSpec {
        UavSpec {
            u_max: self.uav.u_max_ms,
            u_wind: self.uav.u_wind_ms,
            p: self.uav.p,
            d: self.uav.d_m,
            t_max: self.t_max_s(),
        }
    }

    pub fn epsilon_mode(&self) -> EpsilonMode {
        match self.range.epsilon_mode.as_str() {
            "floor" => EpsilonMode::Floor { granularity: self.range.granularity_ms },
            "nearest" => EpsilonMode::Nearest { granularity: self.range.granularity_ms },
            _ => EpsilonMode::Override {
                value: self.range.epsilon_v_ms.expect("validated: override mode carries a value"),
            },
        }
    }
}
