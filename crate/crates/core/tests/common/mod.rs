//! Shared test machinery: an exhaustive placement oracle, random instance
//! generators, and a raw asymmetric-matrix builder. Everything here is
//! deliberately independent of the solver code paths it checks.

use rand::rngs::StdRng;
use rand::Rng;
use uavplan_core::placement::{PlacementProblem, Turbine};
use uavplan_core::range::build_range;
use uavplan_core::routing::LegCostMatrix;
use uavplan_core::wind::{Point2D, WindSample, WindVector};

/// Random asymmetric travel-time matrix over `n` interior nodes plus the
/// start, entries in [60, 900) seconds.
pub fn random_times_matrix(n: usize, seed: u64) -> LegCostMatrix {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0xd1b54a32d192ed03);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        60.0 + (state % 1_000_000) as f64 / 1_000_000.0 * 840.0
    };
    let total = n + 1;
    let mut time = vec![vec![0.0; total]; total];
    for k in 0..total {
        for l in 0..total {
            if k != l {
                time[k][l] = next();
            }
        }
    }
    LegCostMatrix::from_times((0..total).map(|i| format!("N{i}")).collect(), time)
}

/// A random placement instance that is feasible by construction: distinct
/// turbine sites with a minimum separation, a comm distance that links every
/// candidate to a neighbor, and ranges whose drift stays well inside ρ so
/// every candidate covers at least its own turbine.
pub fn random_placement_instance(rng: &mut StdRng, turbines_lo: usize, turbines_hi: usize) -> PlacementProblem {
    let t = rng.random_range(turbines_lo..=turbines_hi);
    let span = 900.0 * (t as f64).sqrt();

    let mut positions: Vec<Point2D> = Vec::with_capacity(t);
    while positions.len() < t {
        let p = Point2D::new(rng.random_range(0.0..span), rng.random_range(0.0..span));
        if positions.iter().all(|q| q.distance(p) >= 250.0) {
            positions.push(p);
        }
    }
    let turbines: Vec<Turbine> = positions
        .iter()
        .enumerate()
        .map(|(i, &position)| Turbine { code: format!("T{i:02}"), position })
        .collect();

    // d: every candidate gets at least one link.
    let max_nn = positions
        .iter()
        .enumerate()
        .map(|(i, p)| {
            positions
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| p.distance(*q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0_f64, f64::max);
    let d = max_nn * rng.random_range(1.4..2.5);

    // ρ between a third of the span and beyond it; drift capped well under ρ.
    let u_max = 16.0;
    let rho = span * rng.random_range(0.35..1.3);
    let t_max = 2.0 * rho / u_max;
    let epsilon_v = rng.random_range(0.0..0.4) * rho / t_max;
    let samples: Vec<WindSample> = (0..rng.random_range(3..30))
        .map(|_| {
            let dir = rng.random_range(0.0..std::f64::consts::TAU);
            let speed = rng.random_range(0.0..epsilon_v.max(0.1));
            WindSample {
                mean: WindVector::new(speed * dir.cos(), speed * dir.sin()),
                gust_speed: None,
            }
        })
        .collect();

    let p = rng.random_range(1..=6);
    let ranges = turbines
        .iter()
        .map(|tb| build_range(tb.position, &samples, 12, epsilon_v, t_max, u_max))
        .collect();
    PlacementProblem { turbines, ranges, p, d }
}

/// Exhaustive minimum fleet size: smallest candidate subset that covers all
/// turbines within capacity, with every chosen UAV in range of its turbines
/// and (when two or more are chosen) linked to another chosen UAV.
/// Candidates sit on turbines, so positions are fixed by the subset choice.
pub fn optimal_uav_count(problem: &PlacementProblem) -> Option<usize> {
    let n = problem.turbines.len();
    assert!(n <= 16, "oracle is exponential in the candidate count");
    let eligible: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| problem.ranges[i].contains(problem.turbines[k].position))
                .collect()
        })
        .collect();

    let mut best: Option<usize> = None;
    for mask in 1_u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if subset_feasible(problem, &eligible, &subset) {
            best = Some(size);
        }
    }
    best
}

fn subset_feasible(problem: &PlacementProblem, eligible: &[Vec<bool>], subset: &[usize]) -> bool {
    // Link constraint: vacuous for a lone UAV.
    if subset.len() >= 2 {
        let linked = |i: usize| {
            subset.iter().any(|&j| {
                j != i
                    && problem.turbines[i].position.distance(problem.turbines[j].position)
                        <= problem.d
            })
        };
        if !subset.iter().all(|&i| linked(i)) {
            return false;
        }
    }

    // Coverage: bipartite matching of turbines onto UAV slots (capacity p).
    let t = problem.turbines.len();
    let slots = subset.len() * problem.p;
    let adjacency: Vec<Vec<usize>> = (0..t)
        .map(|k| {
            let mut adj = Vec::new();
            for (ui, &i) in subset.iter().enumerate() {
                if eligible[i][k] {
                    for s in 0..problem.p {
                        adj.push(ui * problem.p + s);
                    }
                }
            }
            adj
        })
        .collect();

    let mut slot_owner: Vec<Option<usize>> = vec![None; slots];
    fn augment(
        k: usize,
        adjacency: &[Vec<usize>],
        slot_owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &slot in &adjacency[k] {
            if seen[slot] {
                continue;
            }
            seen[slot] = true;
            match slot_owner[slot] {
                None => {
                    slot_owner[slot] = Some(k);
                    return true;
                }
                Some(other) => {
                    if augment(other, adjacency, slot_owner, seen) {
                        slot_owner[slot] = Some(k);
                        return true;
                    }
                }
            }
        }
        false
    }
    (0..t).all(|k| {
        let mut seen = vec![false; slots];
        augment(k, &adjacency, &mut slot_owner, &mut seen)
    })
}
