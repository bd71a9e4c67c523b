//! Wind-limited flying range as an intersection of drifted discs, plus the
//! launch-threshold statistics used to pick ε_v.
//!
//! The compass is discretized into μ segments. Each segment contributes one
//! disc of radius ρ whose center drifts with that segment's worst admissible
//! wind over a full endurance window; the range is the set of points inside
//! every disc. Discs are kept as a list — membership is an O(μ) loop, with
//! no polygon clipping involved.

use crate::endurance::flying_distance;
use crate::wind::{Point2D, WindSample, WindVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("wind dataset is empty")]
    EmptyDataset,
    #[error("no sample carries a gust value; ratio statistics are undefined")]
    NoGustData,
}

/// Membership slack in meters. With the drift exactly equal to ρ the
/// anchor sits on every disc boundary; a nanometer of slack keeps such
/// exact-boundary points inside despite rounding in the drift arithmetic.
pub const BOUNDARY_SLACK_M: f64 = 1e-9;

/// A closed disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point2D,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, p: Point2D) -> bool {
        self.center.distance(p) <= self.radius + BOUNDARY_SLACK_M
    }
}

/// One segment's contribution to the range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeDisc {
    /// 1-based segment index.
    pub segment: usize,
    /// The representative (envelope) wind of the segment.
    pub wind: WindVector,
    pub disc: Disc,
}

/// The set of points reachable out-and-back under every discretized
/// worst-case wind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlyingRange {
    pub anchor: Point2D,
    pub discs: Vec<RangeDisc>,
}

impl FlyingRange {
    /// Membership in the intersection: inside every disc.
    pub fn contains(&self, point: Point2D) -> bool {
        self.discs.iter().all(|d| d.disc.contains(point))
    }
}

/// Distribution views over an hourly wind dataset: gust/mean ratios and
/// mean speeds, each queryable as a cumulative fraction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindStats {
    /// Gust/mean ratios, sorted ascending. Only samples with a recorded
    /// gust and a positive mean contribute.
    ratios: Vec<f64>,
    /// Mean speeds of all samples, sorted ascending.
    means: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl WindStats {
    pub fn sample_count(&self) -> usize {
        self.means.len()
    }

    pub fn gust_count(&self) -> usize {
        self.ratios.len()
    }

    /// Fraction of gust/mean ratios strictly below `x`.
    pub fn fraction_ratio_below(&self, x: f64) -> Result<f64, StatsError> {
        if self.ratios.is_empty() {
            return Err(StatsError::NoGustData);
        }
        Ok(self.ratios.partition_point(|&r| r < x) as f64 / self.ratios.len() as f64)
    }

    /// Fraction of hourly mean speeds strictly below `v`.
    pub fn fraction_mean_below(&self, v: f64) -> f64 {
        self.means.partition_point(|&m| m < v) as f64 / self.means.len() as f64
    }

    /// Equal-width histogram of the gust/mean ratios. Empty when no sample
    /// carries a gust. The final bin is closed on both ends.
    pub fn ratio_histogram(&self, bins: usize) -> Vec<HistogramBin> {
        if self.ratios.is_empty() || bins == 0 {
            return Vec::new();
        }
        let lo = self.ratios[0];
        let hi = *self.ratios.last().unwrap();
        let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
        let mut out: Vec<HistogramBin> = (0..bins)
            .map(|b| HistogramBin {
                lo: lo + b as f64 * width,
                hi: lo + (b + 1) as f64 * width,
                count: 0,
            })
            .collect();
        for &r in &self.ratios {
            let idx = (((r - lo) / width) as usize).min(bins - 1);
            out[idx].count += 1;
        }
        out
    }

    pub fn max_mean(&self) -> f64 {
        self.means.last().copied().unwrap_or(0.0)
    }
}

/// Builds the ratio and mean-speed distributions from a dataset.
pub fn wind_stats(samples: &[WindSample]) -> Result<WindStats, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptyDataset);
    }
    let mut means: Vec<f64> = samples.iter().map(|s| s.mean.speed()).collect();
    let mut ratios: Vec<f64> = samples
        .iter()
        .filter_map(|s| {
            let mean = s.mean.speed();
            s.gust_speed.filter(|_| mean > 0.0).map(|g| g / mean)
        })
        .collect();
    means.sort_by(f64::total_cmp);
    ratios.sort_by(f64::total_cmp);
    Ok(WindStats { ratios, means })
}

/// How the launch threshold ε_v is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum EpsilonMode {
    /// An operator-supplied judgment value, used as-is.
    Override { value: f64 },
    /// Largest multiple of `granularity` whose gusts stay below the wind
    /// rating: floor(u_wind / gust_factor).
    Floor { granularity: f64 },
    /// Same, rounded to the nearest multiple instead.
    Nearest { granularity: f64 },
}

/// Picks the hourly-mean launch threshold so that gusts (modeled as
/// `gust_factor` times the mean) stay below the UAV's wind rating. The
/// dataset's ratio distribution is what justifies the factor; query
/// `stats.fraction_ratio_below(gust_factor)` for the empirical coverage.
pub fn choose_epsilon_v(
    _stats: &WindStats,
    u_wind: f64,
    gust_factor: f64,
    mode: EpsilonMode,
) -> f64 {
    assert!(gust_factor >= 1.0, "gust factor below 1 has no safety meaning");
    match mode {
        EpsilonMode::Override { value } => value,
        EpsilonMode::Floor { granularity } => {
            let g = granularity.max(f64::MIN_POSITIVE);
            (u_wind / gust_factor / g).floor() * g
        }
        EpsilonMode::Nearest { granularity } => {
            let g = granularity.max(f64::MIN_POSITIVE);
            (u_wind / gust_factor / g).round() * g
        }
    }
}

fn segment_midpoint(mu: usize, segment: usize) -> f64 {
    (2.0 * segment as f64 * std::f64::consts::PI - std::f64::consts::PI) / mu as f64
}

/// The representative wind of one compass segment: the largest observed
/// hourly mean in the segment, capped at ε_v, pointing at the segment
/// midpoint. A segment with no observations takes the full ε_v — the
/// conservative choice, since a larger drift only shrinks the range.
pub fn segment_envelope(
    samples: &[WindSample],
    mu: usize,
    epsilon_v: f64,
    segment: usize,
) -> WindVector {
    assert!(mu >= 1 && (1..=mu).contains(&segment), "segment index out of range");
    let lo = TAU * (segment as f64 - 1.0) / mu as f64;
    let hi = TAU * segment as f64 / mu as f64;
    let max_in_segment = samples
        .iter()
        .filter(|s| {
            let dir = s.mean.pol_direction();
            dir >= lo && dir <= hi
        })
        .map(|s| s.mean.speed())
        .fold(f64::NEG_INFINITY, f64::max);

    let speed = if max_in_segment.is_finite() {
        epsilon_v.min(max_in_segment)
    } else {
        epsilon_v
    };
    let dir = segment_midpoint(mu, segment);
    WindVector::new(speed * dir.cos(), speed * dir.sin())
}

/// Builds the flying range anchored at a UAV position: ρ from the speed and
/// endurance limits, one drifted disc per segment.
pub fn build_range(
    anchor: Point2D,
    samples: &[WindSample],
    mu: usize,
    epsilon_v: f64,
    t_max: f64,
    u_max: f64,
) -> FlyingRange {
    assert!(mu >= 1, "need at least one segment");
    assert!(t_max > 0.0 && u_max > 0.0, "limits must be positive");
    let rho = flying_distance(u_max, t_max);
    let discs = (1..=mu)
        .map(|segment| {
            let wind = segment_envelope(samples, mu, epsilon_v, segment);
            let center = Point2D::new(anchor.x + wind.wx * t_max, anchor.y + wind.wy * t_max);
            RangeDisc { segment, wind, disc: Disc { center, radius: rho } }
        })
        .collect();
    FlyingRange { anchor, discs }
}
