//! Planning engine for automated offshore wind-turbine inspection with
//! UAVs: wind-limited flying ranges, fleet-size minimization with a
//! constraint validator, and exact wind-aware inspection tours split under
//! a battery budget.
//!
//! The `uavplan` binary in this crate drives the full pipeline from CSV
//! wind archives and turbine layouts to deterministic JSON plans and SVG
//! figures.

pub mod endurance;
pub mod io;
pub mod placement;
pub mod range;
pub mod routing;
pub mod synth;
pub mod uav;
pub mod wind;

pub use endurance::{flying_distance, max_flight_time, power, AirframeParams, PowerBreakdown};
pub use placement::{plan_placement, PlacementProblem, PlacementState, Turbine};
pub use range::{build_range, choose_epsilon_v, wind_stats, EpsilonMode, FlyingRange, WindStats};
pub use routing::{
    brute_force_path, build_cost_matrix, held_karp_path, plan_route, split_by_endurance,
    LegCostMatrix, RoutePlan,
};
pub use uav::UavSpec;
pub use wind::{is_flyable, leg_kinematics, met_to_pol, wind_from_met, Point2D, WindSample, WindVector};
