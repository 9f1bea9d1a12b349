//! Degree distributions: probability mass over integer degrees plus cached
//! summary statistics (min, max, mean, population std) and the step CDF.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("cannot build a degree distribution from an empty sequence")]
    EmptySequence,
}

/// Probability mass function of a degree sequence.
///
/// `support` holds the distinct degrees in strictly increasing order and
/// `probs[i]` the fraction of nodes with degree `support[i]`. Mean and std
/// are the population moments of the sequence; they are evaluated from exact
/// integer sums so that degenerate cases (single distinct degree ⇒ std == 0)
/// hold without tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeDistribution {
    pub support: Vec<u32>,
    pub probs: Vec<f64>,
    pub min_degree: u32,
    pub max_degree: u32,
    pub mean: f64,
    pub std: f64,
    pub n_nodes: u64,
    #[serde(skip)]
    counts: Vec<u64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl DegreeDistribution {
    pub fn from_degree_sequence(seq: &[u32]) -> Result<Self, StatsError> {
        if seq.is_empty() {
            return Err(StatsError::EmptySequence);
        }
        let mut multiplicity: BTreeMap<u32, u64> = BTreeMap::new();
        for &d in seq {
            *multiplicity.entry(d).or_insert(0) += 1;
        }
        let n = seq.len() as u64;
        let support: Vec<u32> = multiplicity.keys().copied().collect();
        let counts: Vec<u64> = multiplicity.values().copied().collect();
        let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cumulative.push(acc);
        }

        // Population moments from exact integer sums:
        //   mean = S1/n, var = (n*S2 - S1^2)/n^2, both numerators exact in u128.
        let s1: u128 = support
            .iter()
            .zip(&counts)
            .map(|(&d, &c)| d as u128 * c as u128)
            .sum();
        let s2: u128 = support
            .iter()
            .zip(&counts)
            .map(|(&d, &c)| (d as u128) * (d as u128) * c as u128)
            .sum();
        let var_numer = (n as u128) * s2 - s1 * s1;
        let mean = s1 as f64 / n as f64;
        let std = (var_numer as f64).sqrt() / n as f64;

        Ok(DegreeDistribution {
            min_degree: *support.first().expect("non-empty support"),
            max_degree: *support.last().expect("non-empty support"),
            support,
            probs,
            mean,
            std,
            n_nodes: n,
            counts,
            cumulative,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population standard deviation (√(Σ P(d)·(d−μ)²)).
    pub fn std(&self) -> f64 {
        self.std
    }

    /// Node multiplicities aligned with `support`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Step CDF: S(d) = Σ_{d' ≤ d} P(d'). Right-continuous; 0 below the
    /// support, exactly the total mass at and above `max_degree`.
    pub fn cdf(&self, d: u32) -> f64 {
        let idx = self.support.partition_point(|&s| s <= d);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// `degree,probability` CSV rows, one per support point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "degree,probability")?;
        for (d, p) in self.support.iter().zip(&self.probs) {
            writeln!(w, "{},{}", d, p)?;
        }
        Ok(())
    }
}
