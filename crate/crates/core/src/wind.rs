//! Wind-direction conventions, the velocity triangle, and per-leg travel time.
//!
//! Meteorological direction is the compass bearing the wind blows *from*,
//! clockwise from north. Everything internal works in the polar convention
//! (counterclockwise from +x) and SI units.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Implied airspeed may exceed the limit by at most this much before the
/// tail-wind branch flags the leg.
pub const AIRSPEED_SLACK: f64 = 1e-6;

/// Planar position in meters (x east, y north).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Wind velocity split into x/y components (m/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindVector {
    pub wx: f64,
    pub wy: f64,
}

impl WindVector {
    pub const ZERO: WindVector = WindVector { wx: 0.0, wy: 0.0 };

    pub fn new(wx: f64, wy: f64) -> Self {
        Self { wx, wy }
    }

    pub fn speed(&self) -> f64 {
        self.wx.hypot(self.wy)
    }

    /// Direction in the polar convention, normalized into [0, 2π).
    pub fn pol_direction(&self) -> f64 {
        self.wy.atan2(self.wx).rem_euclid(TAU)
    }
}

/// A velocity that is not wind: either the UAV's own velocity or the
/// wind-influenced resultant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Velocity {
    pub x: f64,
    pub y: f64,
}

impl Velocity {
    pub fn speed(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// One historical hourly wind record reduced to what the planner needs:
/// the mean wind as a vector and the gust magnitude when recorded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindSample {
    pub mean: WindVector,
    pub gust_speed: Option<f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("wind speed must be non-negative, got {0}")]
    NegativeSpeed(f64),
    #[error("leg endpoints coincide at ({x}, {y})")]
    DegenerateLeg { x: f64, y: f64 },
    #[error(
        "head wind leaves no forward groundspeed (wind {wind_speed:.2} m/s against course, max speed {u_max:.2} m/s)"
    )]
    InfeasibleLeg { wind_speed: f64, u_max: f64 },
}

/// Converts a meteorological direction (clockwise, 0 = north) to the polar
/// convention (counterclockwise, 0 = +x), normalized into [0, 2π).
pub fn met_to_pol(theta_met: f64) -> f64 {
    (1.5 * PI - theta_met.rem_euclid(TAU)).rem_euclid(TAU)
}

/// Builds the wind vector for a given speed and meteorological direction.
/// A north met wind blows toward -y, an east met wind toward -x.
pub fn wind_from_met(speed: f64, theta_met: f64) -> Result<WindVector, KinematicsError> {
    if speed < 0.0 {
        return Err(KinematicsError::NegativeSpeed(speed));
    }
    let pol = met_to_pol(theta_met);
    Ok(WindVector::new(speed * pol.cos(), speed * pol.sin()))
}

/// Resolved velocities and travel time for one directed leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegKinematics {
    /// Resultant (over-ground) velocity.
    pub resultant: Velocity,
    /// The UAV's own velocity relative to the air mass.
    pub uav_velocity: Velocity,
    pub groundspeed: f64,
    pub airspeed: f64,
    /// Angle between course and wind, in [0, π]. Tail wind when ≤ π/2.
    pub theta_sw: f64,
    /// Angle between resultant and UAV velocity (crab angle).
    pub theta_sv: f64,
    /// Travel time in seconds.
    pub time: f64,
    /// Set when the tail-wind rule pins groundspeed at the limit but the
    /// crosswind component pushes the implied airspeed above it.
    pub airspeed_over_limit: bool,
}

/// Resolves the velocity triangle for a directed leg under a steady wind.
///
/// Tail wind (course-wind angle ≤ π/2): groundspeed is pinned at `u_max`
/// and the UAV velocity is whatever closes the triangle. Head wind: the
/// airspeed is pinned at `u_max`, the crab angle cancels the crosswind, and
/// the groundspeed is what remains along the course.
pub fn leg_kinematics(
    from: Point2D,
    to: Point2D,
    wind: WindVector,
    u_max: f64,
) -> Result<LegKinematics, KinematicsError> {
    assert!(u_max > 0.0, "u_max must be positive");
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    let dist = dx.hypot(dy);
    if dist == 0.0 {
        return Err(KinematicsError::DegenerateLeg { x: from.x, y: from.y });
    }
    let theta_s = dy.atan2(dx);
    let course = (theta_s.cos(), theta_s.sin());
    let wind_speed = wind.speed();

    // Angle between course and wind from the normalized inner product,
    // clamped against rounding. Zero wind counts as tail.
    let theta_sw = if wind_speed == 0.0 {
        0.0
    } else {
        let cos_sw = ((course.0 * wind.wx + course.1 * wind.wy) / wind_speed).clamp(-1.0, 1.0);
        cos_sw.acos()
    };

    let tail = theta_sw <= PI / 2.0;
    let (groundspeed, theta_sv) = if tail {
        (u_max, f64::NAN) // crab angle filled in from the closed triangle below
    } else {
        let alpha = PI - theta_sw;
        let sin_ratio = wind_speed * alpha.sin() / u_max;
        if sin_ratio > 1.0 {
            return Err(KinematicsError::InfeasibleLeg { wind_speed, u_max });
        }
        let theta_sv = sin_ratio.asin();
        let groundspeed = u_max * theta_sv.cos() - wind_speed * alpha.cos();
        if groundspeed <= 0.0 {
            return Err(KinematicsError::InfeasibleLeg { wind_speed, u_max });
        }
        (groundspeed, theta_sv)
    };

    let resultant = Velocity { x: groundspeed * course.0, y: groundspeed * course.1 };
    let uav_velocity = Velocity { x: resultant.x - wind.wx, y: resultant.y - wind.wy };
    let airspeed = uav_velocity.speed();
    let theta_sv = if theta_sv.is_nan() {
        angle_between(resultant, uav_velocity)
    } else {
        theta_sv
    };

    Ok(LegKinematics {
        resultant,
        uav_velocity,
        groundspeed,
        airspeed,
        theta_sw,
        theta_sv,
        time: dist / groundspeed,
        airspeed_over_limit: airspeed > u_max + AIRSPEED_SLACK,
    })
}

fn angle_between(a: Velocity, b: Velocity) -> f64 {
    let na = a.speed();
    let nb = b.speed();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (((a.x * b.x + a.y * b.y) / (na * nb)).clamp(-1.0, 1.0)).acos()
}

/// A UAV may launch only while the wind stays within its rated resistance.
pub fn is_flyable(wind: WindVector, u_wind: f64) -> bool {
    wind.speed() <= u_wind
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const U_MAX: f64 = 16.0;

    #[test]
    fn met_to_pol_cardinal_directions() {
        assert_relative_eq!(met_to_pol(PI / 2.0), PI, epsilon = 1e-12);
        assert_relative_eq!(met_to_pol(1.5 * PI), 0.0, epsilon = 1e-12);
        assert_relative_eq!(met_to_pol(0.0), 1.5 * PI, epsilon = 1e-12);
    }

    #[test]
    fn wind_from_met_components() {
        let calm = wind_from_met(0.0, 1.234).unwrap();
        assert_eq!(calm.speed(), 0.0);

        let east = wind_from_met(8.0, PI / 2.0).unwrap();
        assert_relative_eq!(east.wx, -8.0, epsilon = 1e-12);
        assert_relative_eq!(east.wy, 0.0, epsilon = 1e-12);
        assert_relative_eq!(east.speed(), 8.0, epsilon = 1e-12);

        let north = wind_from_met(8.0, 0.0).unwrap();
        assert_relative_eq!(north.wx, 0.0, epsilon = 1e-12);
        assert_relative_eq!(north.wy, -8.0, epsilon = 1e-12);
    }

    #[test]
    fn wind_from_met_rejects_negative_speed() {
        assert!(matches!(
            wind_from_met(-1.0, 0.0),
            Err(KinematicsError::NegativeSpeed(_))
        ));
    }

    #[test]
    fn zero_wind_leg_is_pure_distance_over_speed() {
        let leg = leg_kinematics(
            Point2D::new(0.0, 0.0),
            Point2D::new(960.0, 0.0),
            WindVector::ZERO,
            U_MAX,
        )
        .unwrap();
        assert_relative_eq!(leg.groundspeed, 16.0);
        assert_relative_eq!(leg.time, 60.0);
        assert_relative_eq!(leg.airspeed, 16.0);
        assert!(!leg.airspeed_over_limit);
    }

    #[test]
    fn colinear_head_wind_subtracts() {
        let leg = leg_kinematics(
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            WindVector::new(-8.0, 0.0),
            U_MAX,
        )
        .unwrap();
        assert_relative_eq!(leg.theta_sw, PI, epsilon = 1e-12);
        assert_relative_eq!(leg.theta_sv, 0.0, epsilon = 1e-12);
        assert_relative_eq!(leg.groundspeed, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn colinear_tail_wind_caps_groundspeed() {
        let leg = leg_kinematics(
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            WindVector::new(8.0, 0.0),
            U_MAX,
        )
        .unwrap();
        assert_relative_eq!(leg.groundspeed, 16.0);
        assert_relative_eq!(leg.airspeed, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn perpendicular_wind_goes_to_tail_branch() {
        // Boundary θ_sw = π/2 exactly: groundspeed pinned at the limit.
        let leg = leg_kinematics(
            Point2D::new(0.0, 0.0),
            Point2D::new(100.0, 0.0),
            WindVector::new(0.0, 8.0),
            U_MAX,
        )
        .unwrap();
        assert_relative_eq!(leg.theta_sw, PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(leg.groundspeed, 16.0);
        // Crosswind at pinned groundspeed implies airspeed above the limit.
        assert_relative_eq!(leg.airspeed, (256.0_f64 + 64.0).sqrt(), epsilon = 1e-9);
        assert!(leg.airspeed_over_limit);
    }

    #[test]
    fn overwhelming_head_wind_is_infeasible() {
        let err = leg_kinematics(
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            WindVector::new(-16.0, 0.0),
            U_MAX,
        )
        .unwrap_err();
        assert!(matches!(err, KinematicsError::InfeasibleLeg { .. }));

        // Crosswind component alone beyond u_max is also infeasible.
        let err = leg_kinematics(
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            WindVector::new(-1.0, 17.5),
            U_MAX,
        )
        .unwrap_err();
        assert!(matches!(err, KinematicsError::InfeasibleLeg { .. }));
    }

    #[test]
    fn degenerate_leg_is_rejected() {
        let p = Point2D::new(3.0, 4.0);
        assert!(matches!(
            leg_kinematics(p, p, WindVector::ZERO, U_MAX),
            Err(KinematicsError::DegenerateLeg { .. })
        ));
    }

    #[test]
    fn flyability_boundary_is_inclusive() {
        assert!(is_flyable(WindVector::new(8.0, 0.0), 15.0));
        assert!(is_flyable(WindVector::new(15.0, 0.0), 15.0));
        assert!(!is_flyable(WindVector::new(15.1, 0.0), 15.0));
    }

    fn arbitrary_leg() -> impl Strategy<Value = (Point2D, Point2D, WindVector)> {
        (
            -5000.0..5000.0_f64,
            -5000.0..5000.0_f64,
            -5000.0..5000.0_f64,
            -5000.0..5000.0_f64,
            0.0..12.0_f64,
            0.0..TAU,
        )
            .prop_filter_map("distinct endpoints", |(ax, ay, bx, by, ws, dir)| {
                let from = Point2D::new(ax, ay);
                let to = Point2D::new(bx, by);
                if from.distance(to) < 1.0 {
                    return None;
                }
                let wind = WindVector::new(ws * dir.cos(), ws * dir.sin());
                Some((from, to, wind))
            })
    }

    proptest! {
        // Reconstructing s = v + w reproduces the resultant.
        #[test]
        fn velocity_triangle_closes((from, to, wind) in arbitrary_leg()) {
            let leg = leg_kinematics(from, to, wind, U_MAX).unwrap();
            prop_assert!((leg.uav_velocity.x + wind.wx - leg.resultant.x).abs() < 1e-9);
            prop_assert!((leg.uav_velocity.y + wind.wy - leg.resultant.y).abs() < 1e-9);
            prop_assert!(leg.time > 0.0);
            prop_assert!(leg.groundspeed <= U_MAX + 1e-9);
        }

        // Tail branch pins groundspeed exactly; airspeed within the limit
        // unless the leg is flagged. Head branch pins airspeed instead.
        #[test]
        fn branch_speed_pins((from, to, wind) in arbitrary_leg()) {
            let leg = leg_kinematics(from, to, wind, U_MAX).unwrap();
            if leg.theta_sw <= PI / 2.0 {
                prop_assert_eq!(leg.groundspeed, U_MAX);
                prop_assert!(leg.airspeed <= U_MAX + AIRSPEED_SLACK || leg.airspeed_over_limit);
            } else {
                prop_assert!((leg.airspeed - U_MAX).abs() < 1e-9);
                prop_assert!(!leg.airspeed_over_limit);
            }
        }

        // Head-wind groundspeed never increases as the wind strengthens.
        #[test]
        fn head_wind_monotonicity(
            dir in 0.0..TAU,
            wind_dir in 0.0..TAU,
            w1 in 0.0..15.9_f64,
            delta in 0.0..4.0_f64,
        ) {
            let from = Point2D::new(0.0, 0.0);
            let to = Point2D::new(1000.0 * dir.cos(), 1000.0 * dir.sin());
            let unit = WindVector::new(wind_dir.cos(), wind_dir.sin());
            let w2 = (w1 + delta).min(15.9);
            let lo = leg_kinematics(from, to, WindVector::new(unit.wx * w1, unit.wy * w1), U_MAX);
            let hi = leg_kinematics(from, to, WindVector::new(unit.wx * w2, unit.wy * w2), U_MAX);
            if let (Ok(lo), Ok(hi)) = (lo, hi) {
                if lo.theta_sw > PI / 2.0 && hi.theta_sw > PI / 2.0 {
                    prop_assert!(hi.groundspeed <= lo.groundspeed + 1e-9);
                }
            }
        }

        // With wind neither zero nor perpendicular, the two directions of a
        // leg take different times; without wind they agree.
        #[test]
        fn reversal_asymmetry((from, to, wind) in arbitrary_leg()) {
            let fwd = leg_kinematics(from, to, wind, U_MAX).unwrap();
            let back = leg_kinematics(to, from, wind, U_MAX).unwrap();
            let perpendicular = (fwd.theta_sw - PI / 2.0).abs() < 1e-6;
            if wind.speed() > 1e-6 && !perpendicular {
                prop_assert!((fwd.time - back.time).abs() > 1e-9);
            }
            let calm_fwd = leg_kinematics(from, to, WindVector::ZERO, U_MAX).unwrap();
            let calm_back = leg_kinematics(to, from, WindVector::ZERO, U_MAX).unwrap();
            prop_assert!((calm_fwd.time - calm_back.time).abs() < 1e-9);
        }

        // met→pol applied twice is the identity (mod 2π).
        #[test]
        fn met_to_pol_involution(theta in 0.0..TAU) {
            let twice = met_to_pol(met_to_pol(theta));
            let diff = (twice - theta).rem_euclid(TAU);
            prop_assert!(diff < 1e-9 || (TAU - diff) < 1e-9);
        }
    }
}
