//! Operational limits of the inspection UAV fleet.

use serde::{Deserialize, Serialize};

/// Fleet-wide operating limits, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UavSpec {
    /// Maximum flying speed (m/s); caps both airspeed and groundspeed.
    pub u_max: f64,
    /// Maximum wind-speed resistance (m/s); no launch above it.
    pub u_wind: f64,
    /// Inspection capacity: turbines per UAV.
    pub p: usize,
    /// Communication-link distance between UAVs (m).
    pub d: f64,
    /// Maximum flight time per sortie (s).
    pub t_max: f64,
}

impl Default for UavSpec {
    fn default() -> Self {
        Self { u_max: 16.0, u_wind: 15.0, p: 5, d: 5000.0, t_max: 1200.0 }
    }
}
