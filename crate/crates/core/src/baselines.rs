//! Baseline comparators for degree distributions: two-sample
//! Kolmogorov-Smirnov distance, fitted power-law exponents, and eight-bin
//! percentile vectors compared by Manhattan distance.

use serde::Serialize;
use thiserror::Error;

use crate::quantify::interval_probability;
use crate::stats::DegreeDistribution;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("power-law fit needs at least two distinct positive degrees")]
    DegenerateSupport,
}

/// Maximum absolute difference between the two step CDFs over all integer
/// degrees. Both CDFs are right-continuous step functions, so the maximum is
/// attained at a jump point; evaluating at the union of the supports is
/// exhaustive.
pub fn ks_distance(a: &DegreeDistribution, b: &DegreeDistribution) -> f64 {
    let mut best = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.support.len() || j < b.support.len() {
        let d = match (a.support.get(i), b.support.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!("loop condition"),
        };
        if a.support.get(i) == Some(&d) {
            i += 1;
        }
        if b.support.get(j) == Some(&d) {
            j += 1;
        }
        best = best.max((a.cdf(d) - b.cdf(d)).abs());
    }
    best
}

/// Discrete maximum-likelihood power-law exponent
/// `γ̂ = 1 + n·[Σ ln(d_i/(d_min − 0.5))]⁻¹` over all nodes with positive
/// degree, where `d_min` is the smallest positive degree.
///
/// The continuous `−0.5` approximation is accurate for `d_min ≳ 6` and
/// biased low near `d_min = 1`; the estimate is used as a comparator, not an
/// inference procedure.
pub fn powerlaw_exponent(dd: &DegreeDistribution) -> Result<f64, FitError> {
    let first_positive = dd.support.partition_point(|&d| d == 0);
    let positive_support = &dd.support[first_positive..];
    if positive_support.len() < 2 {
        return Err(FitError::DegenerateSupport);
    }
    let counts = &dd.counts()[first_positive..];
    let d_min = positive_support[0] as f64;
    let n: u64 = counts.iter().sum();
    let log_sum: f64 = positive_support
        .iter()
        .zip(counts)
        .map(|(&d, &c)| c as f64 * (d as f64 / (d_min - 0.5)).ln())
        .sum();
    Ok(1.0 + n as f64 / log_sum)
}

/// `|γ̂₁ − γ̂₂|`; propagates fit errors from either side.
pub fn powerlaw_distance(a: &DegreeDistribution, b: &DegreeDistribution) -> Result<f64, FitError> {
    Ok((powerlaw_exponent(a)? - powerlaw_exponent(b)?).abs())
}

/// Eight equal-width bins over `[min_degree, max_degree]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercentileVector {
    pub bins: [f64; 8],
}

/// Splits `[min_degree, max_degree]` into 8 equal-width bins and collects
/// the probability mass per bin. Bins are half-open except the last
/// (closed); a degenerate range (min = max) puts all mass in the last bin.
pub fn percentiles_quantify(dd: &DegreeDistribution) -> PercentileVector {
    let min = dd.min_degree as f64;
    let max = dd.max_degree as f64;
    let width_total = max - min;
    let mut borders = [0.0f64; 9];
    for (i, border) in borders.iter_mut().enumerate() {
        *border = if i == 8 { max } else { min + (i as f64 * width_total) / 8.0 };
    }
    let mut bins = [0.0f64; 8];
    for i in 0..8 {
        bins[i] = interval_probability(dd, borders[i], borders[i + 1], i == 7);
    }
    PercentileVector { bins }
}

/// Manhattan distance between two percentile vectors; bounded by 2.
pub fn percentiles_distance(a: &PercentileVector, b: &PercentileVector) -> f64 {
    a.bins.iter().zip(&b.bins).map(|(x, y)| (x - y).abs()).sum()
}
