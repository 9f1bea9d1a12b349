//! Quantification of degree distributions and the multi-granularity distance.
//!
//! A distribution is split into four regions around its mean:
//! `[min, μ−ασ]`, `[μ−ασ, μ]`, `[μ, μ+ασ]`, `[μ+ασ, max]`. Each region is cut
//! into `L = 2^β` equal-width intervals, and the feature vector collects the
//! probability mass falling in each of the `4L` intervals ("interval degree
//! probabilities", IDPs).
//!
//! Conventions that make the vector well behaved:
//!
//! - intervals are half-open `[lo, hi)` except the single overall rightmost
//!   interval, which is closed, so the intervals partition the support and
//!   the vector sums to 1;
//! - a region whose raw length is negative (`upper < lower`, possible for the
//!   two outer regions) keeps zero-length intervals and all its IDPs are set
//!   to 0; its mass is captured by the adjacent inner region, whose span
//!   covers it;
//! - a region with raw length exactly 0 is still evaluated under the
//!   half-open/closed rules (this routes `P(max)` through the closed last
//!   interval when `μ+ασ = max`, and the whole mass of a constant
//!   distribution into the last interval).
//!
//! Halving β merges adjacent interval pairs, so a level-β vector coarsens to
//! the level-(β−1) vector by summing pairs ([`QuantifiedDistribution::coarsen`]).
//! The distance between two equally parameterized vectors is a γ-discounted
//! sum of L1 distances over all levels β, β−1, …, 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::DegreeDistribution;

/// Largest accepted β; beyond this the 4·2^β vector would exceed 4M entries.
pub const MAX_BETA: u32 = 20;

#[derive(Debug, Error, PartialEq)]
pub enum QuantificationError {
    #[error("alpha must be a finite positive real, got {0}")]
    InvalidAlpha(f64),
    #[error("gamma must be a finite positive real, got {0}")]
    InvalidGamma(f64),
    #[error("beta {0} exceeds the supported maximum {MAX_BETA}")]
    BetaTooLarge(u32),
    #[error("operands were quantified with different parameters (alpha {0} vs {1}, beta {2} vs {3})")]
    MismatchedParams(f64, f64, u32, u32),
    #[error("cannot coarsen below beta = 0")]
    CoarsenAtLevelZero,
}

/// Quantification parameters: region width multiplier α, granularity
/// exponent β (intervals per region `L = 2^β`), and the per-level discount γ
/// used only by the distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationParams {
    pub alpha: f64,
    pub beta: u32,
    pub gamma: f64,
}

impl Default for QuantizationParams {
    /// The recommended operating point: α=1, β=3, γ=0.8.
    fn default() -> Self {
        QuantizationParams { alpha: 1.0, beta: 3, gamma: 0.8 }
    }
}

impl QuantizationParams {
    pub fn validate(&self) -> Result<(), QuantificationError> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(QuantificationError::InvalidAlpha(self.alpha));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(QuantificationError::InvalidGamma(self.gamma));
        }
        if self.beta > MAX_BETA {
            return Err(QuantificationError::BetaTooLarge(self.beta));
        }
        Ok(())
    }

    /// Intervals per region.
    pub fn intervals_per_region(&self) -> usize {
        1usize << self.beta
    }
}

/// The interval layout derived from a distribution and α at a fixed L.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalGrid {
    /// `[min, μ−ασ, μ, μ+ασ, max]`; inner points may exit `[min, max]`.
    pub region_points: [f64; 5],
    /// Signed region lengths before clamping; negative means the region is
    /// inverted and its intervals are zeroed.
    pub raw_lengths: [f64; 4],
    /// Clamped lengths `max(upper − lower, 0)`.
    pub region_lengths: [f64; 4],
    /// The `4L+1` interval borders; non-monotonic only across a clamped
    /// region, because every region anchors at its own lower bound.
    pub points: Vec<f64>,
    /// Intervals per region (L).
    pub intervals_per_region: usize,
}

impl IntervalGrid {
    pub fn new(dd: &DegreeDistribution, alpha: f64, intervals_per_region: usize) -> Self {
        let l = intervals_per_region;
        assert!(l >= 1, "intervals per region must be at least 1");
        let mu = dd.mean();
        let sigma = dd.std();
        let region_points = [
            dd.min_degree as f64,
            mu - alpha * sigma,
            mu,
            mu + alpha * sigma,
            dd.max_degree as f64,
        ];
        let raw_lengths = [
            region_points[1] - region_points[0],
            region_points[2] - region_points[1],
            region_points[3] - region_points[2],
            region_points[4] - region_points[3],
        ];
        let region_lengths = raw_lengths.map(|len| len.max(0.0));

        let mut points = Vec::with_capacity(4 * l + 1);
        for r in 0..4 {
            let base = region_points[r];
            let len = region_lengths[r];
            for j in 0..l {
                points.push(base + (j as f64 * len) / l as f64);
            }
        }
        // The closing border is exactly max when region 4 is not inverted
        // (the formula's value in real arithmetic), else its own anchor.
        points.push(if raw_lengths[3] >= 0.0 { region_points[4] } else { region_points[3] });

        IntervalGrid { region_points, raw_lengths, region_lengths, points, intervals_per_region: l }
    }
}

/// The five region points `[min, μ−ασ, μ, μ+ασ, max]`, unclamped.
pub fn region_bounds(dd: &DegreeDistribution, alpha: f64) -> [f64; 5] {
    IntervalGrid::new(dd, alpha, 1).region_points
}

/// The `4L+1` interval borders (L per region, anchored at each region's own
/// lower bound with step `length/L`).
pub fn interval_points(dd: &DegreeDistribution, alpha: f64, intervals_per_region: usize) -> Vec<f64> {
    IntervalGrid::new(dd, alpha, intervals_per_region).points
}

/// Probability mass of `[lo, hi)`, or `[lo, hi]` when `closed_right`.
/// Zero when `hi < lo` or no support degree falls inside.
pub fn interval_probability(dd: &DegreeDistribution, lo: f64, hi: f64, closed_right: bool) -> f64 {
    if hi < lo {
        return 0.0;
    }
    let start = dd.support.partition_point(|&s| (s as f64) < lo);
    let end = if closed_right {
        dd.support.partition_point(|&s| (s as f64) <= hi)
    } else {
        dd.support.partition_point(|&s| (s as f64) < hi)
    };
    // Fold from +0.0: an empty interval must quantify to +0.0, while
    // `Iterator::sum` for f64 starts from -0.0.
    dd.probs[start.min(end)..end].iter().fold(0.0, |acc, p| acc + p)
}

/// A quantified degree distribution: `4·2^β` interval degree probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantifiedDistribution {
    pub alpha: f64,
    pub beta: u32,
    pub idp: Vec<f64>,
}

impl QuantifiedDistribution {
    pub fn len(&self) -> usize {
        self.idp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idp.is_empty()
    }

    /// Collapses to granularity β−1 by summing adjacent interval pairs.
    pub fn coarsen(&self) -> Result<Self, QuantificationError> {
        if self.beta == 0 {
            return Err(QuantificationError::CoarsenAtLevelZero);
        }
        Ok(QuantifiedDistribution {
            alpha: self.alpha,
            beta: self.beta - 1,
            idp: coarsen_pairs(&self.idp),
        })
    }
}

fn coarsen_pairs(idp: &[f64]) -> Vec<f64> {
    idp.chunks_exact(2).map(|pair| pair[0] + pair[1]).collect()
}

/// Quantifies a distribution into its `4·2^β` IDP vector.
///
/// # Panics
///
/// Panics if `params` fail [`QuantizationParams::validate`]; validate
/// user-supplied parameters first.
pub fn quantify(dd: &DegreeDistribution, params: &QuantizationParams) -> QuantifiedDistribution {
    params.validate().expect("quantify requires valid params");
    let l = params.intervals_per_region();
    let grid = IntervalGrid::new(dd, params.alpha, l);
    let last = 4 * l - 1;
    let idp = (0..4 * l)
        .map(|i| {
            if grid.raw_lengths[i / l] < 0.0 {
                0.0
            } else {
                interval_probability(dd, grid.points[i], grid.points[i + 1], i == last)
            }
        })
        .collect();
    QuantifiedDistribution { alpha: params.alpha, beta: params.beta, idp }
}

/// The multi-granularity distance between two quantifications sharing
/// (α, β): `Σ_{s=0..β} γ^s · L1(level-s vectors)`, with level-s vectors
/// obtained by repeated coarsening from level β.
///
/// Bounded by `Σ_s γ^s · 2`; a pseudometric for any fixed (α, β, γ).
pub fn ddqc_distance(
    a: &QuantifiedDistribution,
    b: &QuantifiedDistribution,
    gamma: f64,
) -> Result<f64, QuantificationError> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(QuantificationError::InvalidGamma(gamma));
    }
    if a.alpha != b.alpha || a.beta != b.beta {
        return Err(QuantificationError::MismatchedParams(a.alpha, b.alpha, a.beta, b.beta));
    }
    let mut va = a.idp.clone();
    let mut vb = b.idp.clone();
    let mut total = 0.0;
    let mut level = a.beta;
    loop {
        let l1: f64 = va.iter().zip(&vb).map(|(x, y)| (x - y).abs()).sum();
        total += gamma.powi(level as i32) * l1;
        if level == 0 {
            break;
        }
        va = coarsen_pairs(&va);
        vb = coarsen_pairs(&vb);
        level -= 1;
    }
    Ok(total)
}
