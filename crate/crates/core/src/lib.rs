//! Degree distribution quantification and comparison (DDQC).
//!
//! The library turns a network's degree distribution into a fixed-length
//! feature vector and measures distances between networks in that feature
//! space. Around that core it provides:
//!
//! - [`graph`]: edge-list parsing into normalized simple undirected graphs;
//! - [`stats`]: degree distributions with mean/std/CDF;
//! - [`quantify`]: region construction, interval grids, quantification
//!   vectors, coarsening, and the multi-granularity distance;
//! - [`baselines`]: two-sample Kolmogorov-Smirnov distance, fitted power-law
//!   exponents, and eight-bin percentile vectors with Manhattan distance;
//! - [`generators`]: eight random-graph models with seeded, reproducible
//!   corpus synthesis;
//! - [`dataset`]: corpus manifests (CSV) tying edge-list files to labels;
//! - [`evaluation`]: pairwise distance matrices, z-score normalization,
//!   intra/inter-class statistics, kNN accuracy, temporal-neighbor series,
//!   and parameter sweeps.
//!
//! ```
//! use ddqc::{quantify, stats::DegreeDistribution};
//!
//! let dd = DegreeDistribution::from_degree_sequence(&[4, 1, 1, 1, 1]).unwrap();
//! let params = quantify::QuantizationParams { alpha: 1.0, beta: 0, gamma: 0.8 };
//! let q = quantify::quantify(&dd, &params);
//! assert_eq!(q.idp, vec![0.0, 0.8, 0.0, 0.2]);
//! ```

pub mod baselines;
pub mod dataset;
pub mod evaluation;
pub mod generators;
pub mod graph;
pub mod quantify;
pub mod stats;

pub use baselines::{ks_distance, percentiles_distance, percentiles_quantify, powerlaw_exponent, PercentileVector};
pub use evaluation::{DistanceMatrix, Method, NormalizedMatrix};
pub use generators::{LabeledGraph, Model, ModelSpec};
pub use graph::Graph;
pub use quantify::{ddqc_distance, QuantificationError, QuantizationParams, QuantifiedDistribution};
pub use stats::DegreeDistribution;
