//! UAV-count minimization: candidate seeding, capacity enforcement, greedy
//! reduction, and a validator for the placement constraints.
//!
//! One candidate UAV starts on every turbine. Capacity trimming drops the
//! farthest redundantly-covered turbines from overloaded candidates; the
//! reduction loop then removes whole candidates whose turbines are all
//! covered elsewhere (as long as the remaining fleet keeps its comm links)
//! and otherwise uniquifies doubly-assigned turbines by distance. All ties
//! break by ascending index, so identical inputs give identical plans.

use crate::range::FlyingRange;
use crate::wind::Point2D;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A turbine site: unique code plus projected position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turbine {
    pub code: String,
    pub position: Point2D,
}

/// The placement instance: turbine sites, one flying range per candidate
/// (candidates sit on the turbines), the per-UAV inspection capacity `p`,
/// and the comm-link distance `d` in meters.
#[derive(Debug, Clone)]
pub struct PlacementProblem {
    pub turbines: Vec<Turbine>,
    pub ranges: Vec<FlyingRange>,
    pub p: usize,
    pub d: f64,
}

/// Mutable solver state over the candidate fleet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementState {
    /// Which candidates are (still) placed.
    pub active: Vec<bool>,
    /// `assign[i][k]`: candidate i inspects turbine k.
    pub assign: Vec<Vec<bool>>,
    /// `links[i][j]`: candidates i and j are within comm distance. Symmetric,
    /// zero diagonal.
    pub links: Vec<Vec<bool>>,
    /// Candidate positions (each on a turbine).
    pub positions: Vec<Point2D>,
    /// Reduction iteration counter.
    pub step: usize,
}

impl PlacementState {
    pub fn candidate_count(&self) -> usize {
        self.active.len()
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn assigned_turbines(&self, i: usize) -> Vec<usize> {
        self.assign[i]
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| b.then_some(k))
            .collect()
    }

    fn assignment_count(&self, i: usize) -> usize {
        self.assign[i].iter().filter(|&&b| b).count()
    }

    /// Number of turbines of candidate i that some other active candidate
    /// also inspects.
    fn shared_count(&self, i: usize) -> usize {
        self.assign[i]
            .iter()
            .enumerate()
            .filter(|&(k, &b)| b && self.covered_by_other(i, k))
            .count()
    }

    /// Pairwise overlap total Σ_j |N_i ∩ N_j| over the other active
    /// candidates: a turbine counts once per additional claimant.
    fn overlap_total(&self, i: usize) -> usize {
        self.assign[i]
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(k, _)| {
                (0..self.candidate_count())
                    .filter(|&j| j != i && self.active[j] && self.assign[j][k])
                    .count()
            })
            .sum()
    }

    fn covered_by_other(&self, i: usize, k: usize) -> bool {
        (0..self.candidate_count()).any(|j| j != i && self.active[j] && self.assign[j][k])
    }

    fn snapshot(&self) -> StepSnapshot {
        StepSnapshot {
            step: self.step,
            active: self.active.clone(),
            assign: self.assign.clone(),
            links: self.links.clone(),
        }
    }
}

/// One frame of the reduction history, enough to redraw the fleet at that
/// step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSnapshot {
    pub step: usize,
    pub active: Vec<bool>,
    pub assign: Vec<Vec<bool>>,
    pub links: Vec<Vec<bool>>,
}

pub type Trace = Vec<StepSnapshot>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlacementError {
    #[error(
        "candidate {uav} must drop to {p} turbines but only {removable} of its {assigned} are covered elsewhere"
    )]
    CapacityInfeasible { uav: usize, assigned: usize, removable: usize, p: usize },
    #[error("reduction stalled at step {step} with {active} candidates still overlapping")]
    ConnectivityBlocked { step: usize, active: usize },
    #[error("final state failed validation: {0}")]
    Validation(String),
}

/// Seeds the state: one active candidate per turbine, links from the comm
/// distance, assignments from range membership.
pub fn init_placement(problem: &PlacementProblem) -> PlacementState {
    let n = problem.turbines.len();
    debug_assert_eq!(problem.ranges.len(), n, "one range per candidate");
    let positions: Vec<Point2D> = problem.turbines.iter().map(|t| t.position).collect();

    let mut links = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && positions[i].distance(positions[j]) <= problem.d {
                links[i][j] = true;
            }
        }
    }

    let mut assign = vec![vec![false; n]; n];
    for i in 0..n {
        for (k, turbine) in problem.turbines.iter().enumerate() {
            assign[i][k] = problem.ranges[i].contains(turbine.position);
        }
    }

    PlacementState { active: vec![true; n], assign, links, positions, step: 0 }
}

/// Trims overloaded candidates down to `p` turbines, dropping the farthest
/// ones first and only when another candidate still covers them.
pub fn enforce_capacity(
    state: &mut PlacementState,
    problem: &PlacementProblem,
) -> Result<(), PlacementError> {
    let n = state.candidate_count();
    for i in 0..n {
        if state.assignment_count(i) <= problem.p {
            continue;
        }
        let mut order = state.assigned_turbines(i);
        order.sort_by(|&a, &b| {
            let da = state.positions[i].distance(problem.turbines[a].position);
            let db = state.positions[i].distance(problem.turbines[b].position);
            db.partial_cmp(&da).unwrap().then(a.cmp(&b))
        });
        for k in order {
            if state.assignment_count(i) <= problem.p {
                break;
            }
            if state.covered_by_other(i, k) {
                state.assign[i][k] = false;
            }
        }
        let assigned = state.assignment_count(i);
        if assigned > problem.p {
            return Err(PlacementError::CapacityInfeasible {
                uav: i,
                assigned,
                removable: state.shared_count(i),
                p: problem.p,
            });
        }
    }
    Ok(())
}

fn links_survive_removal(state: &PlacementState, removed: usize) -> bool {
    let remaining: Vec<usize> = (0..state.candidate_count())
        .filter(|&j| j != removed && state.active[j])
        .collect();
    if remaining.len() < 2 {
        return false;
    }
    remaining
        .iter()
        .all(|&r| remaining.iter().any(|&q| q != r && state.links[r][q]))
}

/// Greedy reduction: while any two active candidates share a turbine, take
/// the candidate with the most shared turbines and either deactivate it
/// (when everything it inspects is covered elsewhere and the remaining
/// fleet keeps at least one link each) or hand each of its shared turbines
/// to the closest claimant. One action per iteration.
pub fn minimize_uavs(
    state: &mut PlacementState,
    problem: &PlacementProblem,
    trace: &mut Trace,
) -> Result<(), PlacementError> {
    let n = state.candidate_count();
    let t = problem.turbines.len();
    // Each iteration deactivates a candidate or clears an assignment.
    let max_iterations = n * (t + 1) + 8;

    for _ in 0..max_iterations {
        let mut best: Option<(usize, usize)> = None; // (overlap total, index), max wins
        for i in 0..n {
            if !state.active[i] {
                continue;
            }
            let overlap = state.overlap_total(i);
            if overlap > 0 && best.is_none_or(|(s, _)| overlap > s) {
                best = Some((overlap, i));
            }
        }
        let Some((_, i)) = best else {
            return Ok(()); // no overlap left
        };

        let turbines_of_i = state.assigned_turbines(i);
        let fully_covered =
            turbines_of_i.iter().all(|&k| state.covered_by_other(i, k));

        if fully_covered && links_survive_removal(state, i) {
            state.active[i] = false;
            state.assign[i].iter_mut().for_each(|b| *b = false);
            for j in 0..n {
                state.links[i][j] = false;
                state.links[j][i] = false;
            }
        } else {
            // Give every contested turbine of i to the closest active
            // claimant; ties fall to the lowest index.
            for k in turbines_of_i {
                let claimants: Vec<usize> = (0..n)
                    .filter(|&j| state.active[j] && state.assign[j][k])
                    .collect();
                if claimants.len() < 2 {
                    continue;
                }
                let winner = claimants
                    .iter()
                    .copied()
                    .min_by(|&a, &b| {
                        let da = state.positions[a].distance(problem.turbines[k].position);
                        let db = state.positions[b].distance(problem.turbines[k].position);
                        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
                    })
                    .unwrap();
                for j in claimants {
                    if j != winner {
                        state.assign[j][k] = false;
                    }
                }
            }
        }
        state.step += 1;
        trace.push(state.snapshot());
    }
    Err(PlacementError::ConnectivityBlocked { step: state.step, active: state.active_count() })
}

/// One validated constraint with any counterexamples found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Informational checks report but do not gate `all_passed`.
    pub informational: bool,
    pub violations: Vec<String>,
}

/// Pass/fail record across all placement constraints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn failures(&self) -> Vec<&ConstraintCheck> {
        self.checks.iter().filter(|c| !c.passed && !c.informational).collect()
    }
}

/// Checks a state against every placement constraint and reports
/// counterexamples. Never fails itself — callers decide what a violation
/// means.
pub fn validate(state: &PlacementState, problem: &PlacementProblem) -> ConstraintReport {
    let n = state.candidate_count();
    let t = problem.turbines.len();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, informational: bool, violations: Vec<String>| {
        checks.push(ConstraintCheck { name, passed: violations.is_empty(), informational, violations });
    };

    // Binary domains hold by construction of the bool representation.
    push("binary-domains", false, Vec::new());

    let mut v = Vec::new();
    for k in 0..t {
        let owners: Vec<usize> = (0..n).filter(|&i| state.assign[i][k]).collect();
        if owners.len() > 1 {
            v.push(format!("turbine {} assigned to candidates {:?}", problem.turbines[k].code, owners));
        }
    }
    push("one-uav-per-turbine", false, v);

    let mut v = Vec::new();
    for i in 0..n {
        let count = state.assignment_count(i);
        if count > problem.p {
            v.push(format!("candidate {i} inspects {count} > p = {}", problem.p));
        }
    }
    push("inspection-capacity", false, v);

    let mut v = Vec::new();
    for i in 0..n {
        for k in 0..t {
            if state.assign[i][k] && !problem.ranges[i].contains(problem.turbines[k].position) {
                v.push(format!(
                    "turbine {} outside flying range of candidate {i}",
                    problem.turbines[k].code
                ));
            }
        }
    }
    push("range-membership", false, v);

    let mut v = Vec::new();
    for i in 0..n {
        if !state.active[i] {
            continue;
        }
        let assigned = state.assigned_turbines(i);
        if assigned.is_empty() {
            continue;
        }
        let on_own = assigned.iter().any(|&k| {
            let p = problem.turbines[k].position;
            p.x == state.positions[i].x && p.y == state.positions[i].y
        });
        if !on_own {
            v.push(format!("candidate {i} is not positioned on any of its assigned turbines"));
        }
    }
    push("position-on-assigned-turbine", false, v);

    let mut v = Vec::new();
    for i in 0..n {
        if !state.active[i] && state.assignment_count(i) > 0 {
            v.push(format!("inactive candidate {i} still has assignments"));
        }
    }
    push("assignment-only-to-active", false, v);

    let mut v = Vec::new();
    for k in 0..t {
        if !(0..n).any(|i| state.active[i] && state.assign[i][k]) {
            v.push(format!("turbine {} is not inspected by anyone", problem.turbines[k].code));
        }
    }
    push("full-coverage", false, v);

    let active: Vec<usize> = (0..n).filter(|&i| state.active[i]).collect();
    let mut v = Vec::new();
    // A lone UAV has nobody to link with and nobody to collide with; the
    // link constraint only binds once a second UAV exists.
    if active.len() >= 2 {
        for &i in &active {
            if !active.iter().any(|&j| j != i && state.links[i][j]) {
                v.push(format!("candidate {i} has no communication link"));
            }
        }
    }
    push("link-per-active-uav", false, v);

    let mut v = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if state.links[i][j] && state.positions[i].distance(state.positions[j]) > problem.d {
                v.push(format!("linked candidates {i},{j} farther apart than d"));
            }
        }
    }
    push("link-distance", false, v);

    // The strict all-pairs reading of the distance constraint; reported for
    // information, the algorithms only ever use d to define links.
    let mut v = Vec::new();
    for a in 0..active.len() {
        for b in (a + 1)..active.len() {
            let (i, j) = (active[a], active[b]);
            if state.positions[i].distance(state.positions[j]) > problem.d {
                v.push(format!("active candidates {i},{j} farther apart than d"));
            }
        }
    }
    push("all-pairs-within-d", true, v);

    ConstraintReport { checks }
}

/// Full pipeline: seed, trim to capacity, reduce, validate. The trace holds
/// the post-trim state (step 0) and one snapshot per reduction step.
pub fn plan_placement(
    problem: &PlacementProblem,
) -> Result<(PlacementState, Trace), PlacementError> {
    let mut state = init_placement(problem);
    enforce_capacity(&mut state, problem)?;
    let mut trace = vec![state.snapshot()];
    minimize_uavs(&mut state, problem, &mut trace)?;
    let report = validate(&state, problem);
    if !report.all_passed() {
        let summary: Vec<String> = report
            .failures()
            .iter()
            .map(|c| format!("{} ({} violations)", c.name, c.violations.len()))
            .collect();
        return Err(PlacementError::Validation(summary.join("; ")));
    }
    Ok((state, trace))
}
