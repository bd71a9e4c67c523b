//! Minimum-time inspection tours under wind: asymmetric leg costs, an exact
//! subset-DP tour solver with a brute-force twin for cross-checking, and the
//! endurance splitter that cuts a tour into battery-sized routes.

use crate::uav::UavSpec;
use crate::wind::{is_flyable, leg_kinematics, KinematicsError, LegKinematics, Point2D, WindVector};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Interior-node limit for the exhaustive solver.
pub const BRUTE_FORCE_LIMIT: usize = 10;
/// Interior-node limit for the subset DP (memory guard).
pub const DP_LIMIT: usize = 20;

/// One node of the routing graph: a turbine code and its position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteNode {
    pub code: String,
    pub position: Point2D,
}

/// Asymmetric travel-time matrix over the start node (index 0) and the
/// turbines to inspect, with the resolved kinematics of every leg kept for
/// audit.
#[derive(Debug, Clone)]
pub struct LegCostMatrix {
    pub nodes: Vec<RouteNode>,
    /// `time[k][l]`: seconds to fly node k → node l. Zero diagonal.
    pub time: Vec<Vec<f64>>,
    pub kinematics: Vec<Vec<Option<LegKinematics>>>,
}

impl LegCostMatrix {
    /// Interior (non-start) node count.
    pub fn interior_count(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// A matrix from raw travel times, for tests and synthetic instances.
    pub fn from_times(codes: Vec<String>, time: Vec<Vec<f64>>) -> Self {
        let n = codes.len();
        assert!(time.len() == n && time.iter().all(|row| row.len() == n));
        let nodes = codes
            .into_iter()
            .map(|code| RouteNode { code, position: Point2D::new(0.0, 0.0) })
            .collect();
        let kinematics = vec![vec![None; n]; n];
        Self { nodes, time, kinematics }
    }
}

/// One battery-limited route: node indices starting and ending at 0, and
/// its duration in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub nodes: Vec<usize>,
    pub duration: f64,
}

/// The full plan for one UAV: ordered routes covering every assigned
/// turbine exactly once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    pub routes: Vec<Route>,
    pub total_duration: f64,
}

impl RoutePlan {
    /// Number of battery-limited routes (M in reports).
    pub fn route_count(&self) -> usize {
        self.routes.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("no turbines to route")]
    NoTurbines,
    #[error("wind {wind_speed:.2} m/s exceeds the {u_wind:.2} m/s rating; no launch")]
    NoFly { wind_speed: f64, u_wind: f64 },
    #[error("leg {from} -> {to} infeasible: {source}")]
    InfeasibleLeg { from: String, to: String, source: KinematicsError },
    #[error("{nodes} interior nodes exceed the {limit}-node limit of the {solver} solver")]
    TooLarge { nodes: usize, limit: usize, solver: &'static str },
    #[error(
        "turbine {code} cannot be visited: out-and-back takes {out_and_back:.1}s against a {t_max:.1}s budget"
    )]
    TurbineUnreachable { code: String, out_and_back: f64, t_max: f64 },
}

/// Evaluates every ordered node pair under the given wind. Entry (k,l) is
/// the wind-resolved travel time; the matrix is generally asymmetric.
pub fn build_cost_matrix(
    start: &RouteNode,
    turbines: &[RouteNode],
    wind: WindVector,
    u_max: f64,
    u_wind: f64,
) -> Result<LegCostMatrix, RoutingError> {
    if turbines.is_empty() {
        return Err(RoutingError::NoTurbines);
    }
    if !is_flyable(wind, u_wind) {
        return Err(RoutingError::NoFly { wind_speed: wind.speed(), u_wind });
    }
    let mut nodes = Vec::with_capacity(turbines.len() + 1);
    nodes.push(start.clone());
    nodes.extend(turbines.iter().cloned());

    let n = nodes.len();
    let mut time = vec![vec![0.0; n]; n];
    let mut kinematics = vec![vec![None; n]; n];
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let leg = leg_kinematics(nodes[k].position, nodes[l].position, wind, u_max)
                .map_err(|source| RoutingError::InfeasibleLeg {
                    from: nodes[k].code.clone(),
                    to: nodes[l].code.clone(),
                    source,
                })?;
            time[k][l] = leg.time;
            kinematics[k][l] = Some(leg);
        }
    }
    Ok(LegCostMatrix { nodes, time, kinematics })
}

/// Result of the exact tour search.
#[derive(Debug, Clone, PartialEq)]
pub struct TourResult {
    /// Closed tour: 0, interiors…, 0.
    pub path: Vec<usize>,
    pub total: f64,
    /// Number of DP states evaluated (n·2^(n-1) for n interiors; 0 for the
    /// brute-force solver).
    pub dp_states: usize,
}

/// Exact minimum-time closed tour by dynamic programming over visit
/// subsets. `g(k, S)` is the best time to inspect the set `S` and return
/// home starting from node `k`; ties in the argmin fall to the lowest node
/// index.
pub fn held_karp_path(costs: &LegCostMatrix) -> Result<TourResult, RoutingError> {
    let n = costs.interior_count();
    if n == 0 {
        return Err(RoutingError::NoTurbines);
    }
    if n > DP_LIMIT {
        return Err(RoutingError::TooLarge { nodes: n, limit: DP_LIMIT, solver: "subset DP" });
    }
    let t = &costs.time;
    let full: usize = (1 << n) - 1;

    // g[mask][k-1]: minimal time from interior k through every interior in
    // `mask` (k not in mask) and back to the start.
    let mut g = vec![vec![f64::INFINITY; n]; full + 1];
    let mut dp_states = 0usize;
    for k in 1..=n {
        g[0][k - 1] = t[k][0];
        dp_states += 1;
    }
    for mask in 1..=full {
        for k in 1..=n {
            if mask & (1 << (k - 1)) != 0 {
                continue;
            }
            let mut best = f64::INFINITY;
            for l in 1..=n {
                let bit = 1 << (l - 1);
                if mask & bit == 0 {
                    continue;
                }
                let cand = t[k][l] + g[mask ^ bit][l - 1];
                if cand < best {
                    best = cand;
                }
            }
            g[mask][k - 1] = best;
            dp_states += 1;
        }
    }

    // Walk the greedy argmin from the start; the first step's value is the
    // tour total.
    let mut path = Vec::with_capacity(n + 2);
    path.push(0);
    let mut remaining = full;
    let mut current = 0usize;
    let mut total = f64::INFINITY;
    while remaining != 0 {
        let mut best = f64::INFINITY;
        let mut best_node = 0usize;
        for l in 1..=n {
            let bit = 1 << (l - 1);
            if remaining & bit == 0 {
                continue;
            }
            let cand = t[current][l] + g[remaining ^ bit][l - 1];
            if cand < best {
                best = cand;
                best_node = l;
            }
        }
        if current == 0 {
            total = best;
        }
        path.push(best_node);
        remaining ^= 1 << (best_node - 1);
        current = best_node;
    }
    path.push(0);
    Ok(TourResult { path, total, dp_states })
}

/// Exhaustive minimum over all visit orders. Permutations are scanned in
/// lexicographic order and replaced only on strict improvement, so ties
/// resolve to the lexicographically smallest tour. Leg times accumulate
/// back-to-front, matching the DP's evaluation order bit for bit.
pub fn brute_force_path(costs: &LegCostMatrix) -> Result<TourResult, RoutingError> {
    let n = costs.interior_count();
    if n == 0 {
        return Err(RoutingError::NoTurbines);
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(RoutingError::TooLarge { nodes: n, limit: BRUTE_FORCE_LIMIT, solver: "brute-force" });
    }
    let t = &costs.time;
    let mut best_total = f64::INFINITY;
    let mut best_order: Option<Vec<usize>> = None;
    for order in (1..=n).permutations(n) {
        let mut cost = t[*order.last().unwrap()][0];
        for w in order.windows(2).rev() {
            cost = t[w[0]][w[1]] + cost;
        }
        cost = t[0][order[0]] + cost;
        if cost < best_total {
            best_total = cost;
            best_order = Some(order);
        }
    }
    let mut path = vec![0];
    path.extend(best_order.unwrap());
    path.push(0);
    Ok(TourResult { path, total: best_total, dp_states: 0 })
}

/// Cuts a closed tour into battery-sized routes. Walking the fixed visit
/// order, a leg is committed only while both the accumulated time and the
/// accumulated time plus the return home stay strictly under `t_max`;
/// otherwise the current route closes with a return and a fresh route opens
/// toward the pending node.
pub fn split_by_endurance(
    path: &[usize],
    costs: &LegCostMatrix,
    t_max: f64,
) -> Result<RoutePlan, RoutingError> {
    assert!(path.len() >= 3 && path[0] == 0 && *path.last().unwrap() == 0, "need a closed tour");
    let t = &costs.time;

    for &k in &path[1..path.len() - 1] {
        let out_and_back = t[0][k] + t[k][0];
        if out_and_back >= t_max {
            return Err(RoutingError::TurbineUnreachable {
                code: costs.nodes[k].code.clone(),
                out_and_back,
                t_max,
            });
        }
    }

    let mut routes: Vec<Route> = Vec::new();
    let mut current = vec![0usize];
    let mut t_accu = 0.0;
    for w in path.windows(2) {
        let (k, l) = (w[0], w[1]);
        let t_next = t_accu + t[k][l];
        let t_compare = t_next + t[l][0];
        if t_next < t_max && t_compare < t_max {
            current.push(l);
            t_accu = t_next;
        } else {
            // Close with a return home, reopen toward l.
            let duration = t_accu + t[k][0];
            current.push(0);
            routes.push(Route { nodes: std::mem::take(&mut current), duration });
            current = vec![0, l];
            t_accu = t[0][l];
        }
    }
    // The tour ends at the start; the last committed leg already returned.
    debug_assert_eq!(*current.last().unwrap(), 0);
    routes.push(Route { nodes: current, duration: t_accu });

    let total_duration = routes.iter().map(|r| r.duration).sum();
    Ok(RoutePlan { routes, total_duration })
}

/// Full routing pipeline for one UAV: cost matrix, exact tour, endurance
/// split.
pub fn plan_route(
    start: &RouteNode,
    turbines: &[RouteNode],
    wind: WindVector,
    spec: &UavSpec,
) -> Result<RoutePlan, RoutingError> {
    let costs = build_cost_matrix(start, turbines, wind, spec.u_max, spec.u_wind)?;
    let tour = held_karp_path(&costs)?;
    split_by_endurance(&tour.path, &costs, spec.t_max)
}
