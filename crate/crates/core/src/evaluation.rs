//! Corpus-level evaluation: pairwise distance matrices, z-score
//! normalization, within/between-class separation, nearest-neighbor
//! classification, temporal drift, and parameter sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::baselines::{
    ks_distance, percentiles_distance, percentiles_quantify, powerlaw_exponent, FitError,
};
use crate::generators::LabeledGraph;
use crate::quantify::{ddqc_distance, quantify, QuantificationError, QuantizationParams};
use crate::stats::{DegreeDistribution, StatsError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("need at least two items, got {0}")]
    TooFewItems(usize),
    #[error(transparent)]
    Quantification(#[from] QuantificationError),
    #[error("power-law fit failed for '{id}': {source}")]
    PowerlawFit {
        id: String,
        #[source]
        source: FitError,
    },
    #[error("cannot build a degree distribution for '{id}': {source}")]
    EmptyItem {
        id: String,
        #[source]
        source: StatsError,
    },
    #[error("all pairwise distances are equal; z-score normalization is undefined")]
    DegenerateDistances,
    #[error("no same-label pairs in the corpus")]
    NoIntraPairs,
    #[error("no cross-label pairs in the corpus")]
    NoInterPairs,
    #[error("k must satisfy 1 <= k <= items-1, got k={k} for {items} items")]
    BadK { k: usize, items: usize },
    #[error("subset size must satisfy 2 <= size <= items and exceed k, got size={size} for {items} items, k={k}")]
    BadSubset { size: usize, items: usize, k: usize },
    #[error("iterations must be at least 1")]
    NoIterations,
    #[error("temporal evaluation needs at least two snapshots, got {0}")]
    TooFewSnapshots(usize),
    #[error("snapshot id '{0}' is not in the distance matrix")]
    UnknownSnapshot(String),
    #[error("parameter sweep needs non-empty alpha and gamma grids")]
    EmptySweepGrid,
}

/// Distance methods available for pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ddqc,
    Ks,
    Powerlaw,
    Percentiles,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ddqc, Method::Ks, Method::Powerlaw, Method::Percentiles];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ddqc => "ddqc",
            Method::Ks => "ks",
            Method::Powerlaw => "powerlaw",
            Method::Percentiles => "percentiles",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}' (expected ddqc, ks, powerlaw, or percentiles)"))
    }
}

/// Symmetric pairwise distance matrix with row identities and labels.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    pub labels: Vec<String>,
    /// Row-major `len × len`, zero diagonal.
    pub values: Vec<f64>,
    pub method: Method,
    pub params: Option<QuantizationParams>,
}

impl DistanceMatrix {
    fn zeros(ids: Vec<String>, labels: Vec<String>, method: Method, params: Option<QuantizationParams>) -> Self {
        let m = ids.len();
        DistanceMatrix { ids, labels, values: vec![0.0; m * m], method, params }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    fn set_symmetric(&mut self, i: usize, j: usize, d: f64) {
        let m = self.len();
        self.values[i * m + j] = d;
        self.values[j * m + i] = d;
    }

    /// Restriction to the given row indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> DistanceMatrix {
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let mut out = DistanceMatrix::zeros(ids, labels, self.method, self.params);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out.values[a * indices.len() + b] = self.get(i, j);
            }
        }
        out
    }
}

fn ordered_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            pairs.push((i, j));
        }
    }
    pairs
}

fn distributions(items: &[LabeledGraph]) -> Result<Vec<DegreeDistribution>, EvalError> {
    let results: Vec<Result<DegreeDistribution, StatsError>> = items
        .par_iter()
        .map(|it| DegreeDistribution::from_degree_sequence(&it.graph.degree_sequence()))
        .collect();
    results
        .into_iter()
        .zip(items)
        .map(|(r, it)| r.map_err(|source| EvalError::EmptyItem { id: it.instance_id.clone(), source }))
        .collect()
}

/// Computes the full pairwise distance matrix for a corpus under one
/// method. Per-item features (quantifications, exponents, percentile
/// vectors) are computed once and reused across pairs; pairs are evaluated
/// in parallel with results identical to sequential evaluation.
pub fn pairwise_distances(
    items: &[LabeledGraph],
    method: Method,
    params: &QuantizationParams,
) -> Result<DistanceMatrix, EvalError> {
    if items.len() < 2 {
        return Err(EvalError::TooFewItems(items.len()));
    }
    let dds = distributions(items)?;
    let ids: Vec<String> = items.iter().map(|it| it.instance_id.clone()).collect();
    let labels: Vec<String> = items.iter().map(|it| it.label.clone()).collect();
    let pairs = ordered_pairs(items.len());
    let dist: Vec<f64> = match method {
        Method::Ddqc => {
            params.validate()?;
            let qs: Vec<_> = dds.par_iter().map(|dd| quantify(dd, params)).collect();
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    ddqc_distance(&qs[i], &qs[j], params.gamma).expect("identical params by construction")
                })
                .collect()
        }
        Method::Ks => pairs.par_iter().map(|&(i, j)| ks_distance(&dds[i], &dds[j])).collect(),
        Method::Powerlaw => {
            let exps: Vec<Result<f64, FitError>> =
                dds.par_iter().map(powerlaw_exponent).collect();
            let mut gammas = Vec::with_capacity(exps.len());
            for (r, id) in exps.into_iter().zip(&ids) {
                gammas.push(r.map_err(|source| EvalError::PowerlawFit { id: id.clone(), source })?);
            }
            pairs.par_iter().map(|&(i, j)| (gammas[i] - gammas[j]).abs()).collect()
        }
        Method::Percentiles => {
            let vs: Vec<_> = dds.par_iter().map(percentiles_quantify).collect();
            pairs.par_iter().map(|&(i, j)| percentiles_distance(&vs[i], &vs[j])).collect()
        }
    };
    let mut matrix = DistanceMatrix::zeros(
        ids,
        labels,
        method,
        matches!(method, Method::Ddqc).then(|| *params),
    );
    for (&(i, j), &d) in pairs.iter().zip(&dist) {
        matrix.set_symmetric(i, j, d);
    }
    Ok(matrix)
}

/// A distance matrix transformed to z-scores of the off-diagonal
/// population, making separation statistics comparable across methods with
/// different scales.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizedMatrix {
    pub ids: Vec<String>,
    pub labels: Vec<String>,
    /// Row-major; every entry (including the diagonal) is transformed by
    /// the same affine map, but only off-diagonal entries feed statistics.
    pub values: Vec<f64>,
    pub mu: f64,
    pub sigma: f64,
}

impl NormalizedMatrix {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }
}

/// Z-scores the matrix against the population mean and standard deviation
/// of its off-diagonal entries. Fails when every pairwise distance is equal
/// (zero spread).
pub fn normalize_zscores(m: &DistanceMatrix) -> Result<NormalizedMatrix, EvalError> {
    let size = m.len();
    if size < 2 {
        return Err(EvalError::TooFewItems(size));
    }
    let count = (size * (size - 1)) as f64;
    let mut sum = 0.0;
    for i in 0..size {
        for j in 0..size {
            if i != j {
                sum += m.get(i, j);
            }
        }
    }
    let mu = sum / count;
    let mut sq = 0.0;
    for i in 0..size {
        for j in 0..size {
            if i != j {
                let d = m.get(i, j) - mu;
                sq += d * d;
            }
        }
    }
    let sigma = (sq / count).sqrt();
    if sigma == 0.0 {
        return Err(EvalError::DegenerateDistances);
    }
    let values = m.values.iter().map(|&v| (v - mu) / sigma).collect();
    Ok(NormalizedMatrix { ids: m.ids.clone(), labels: m.labels.clone(), values, mu, sigma })
}

/// Mean normalized distance within same-label pairs and across
/// different-label pairs. Negative intra and positive inter indicate that
/// the method separates the classes.
pub fn intra_inter(nm: &NormalizedMatrix) -> Result<(f64, f64), EvalError> {
    let size = nm.len();
    let (mut intra_sum, mut intra_n) = (0.0, 0u64);
    let (mut inter_sum, mut inter_n) = (0.0, 0u64);
    for i in 0..size {
        for j in 0..size {
            if i == j {
                continue;
            }
            if nm.labels[i] == nm.labels[j] {
                intra_sum += nm.get(i, j);
                intra_n += 1;
            } else {
                inter_sum += nm.get(i, j);
                inter_n += 1;
            }
        }
    }
    if intra_n == 0 {
        return Err(EvalError::NoIntraPairs);
    }
    if inter_n == 0 {
        return Err(EvalError::NoInterPairs);
    }
    Ok((intra_sum / intra_n as f64, inter_sum / inter_n as f64))
}

/// Leave-one-out k-nearest-neighbor accuracy. Neighbors at equal distance
/// are ordered by id; a tied label vote resolves to the label of the
/// nearest neighbor among the tied labels.
pub fn knn_accuracy(m: &DistanceMatrix, k: usize) -> Result<f64, EvalError> {
    let size = m.len();
    if size < 2 {
        return Err(EvalError::TooFewItems(size));
    }
    if k < 1 || k > size - 1 {
        return Err(EvalError::BadK { k, items: size });
    }
    let correct: usize = (0..size)
        .into_par_iter()
        .map(|i| {
            let mut order: Vec<usize> = (0..size).filter(|&j| j != i).collect();
            order.sort_by(|&a, &b| {
                m.get(i, a)
                    .partial_cmp(&m.get(i, b))
                    .expect("distances are finite")
                    .then_with(|| m.ids[a].cmp(&m.ids[b]))
            });
            let neighbors = &order[..k];
            let mut votes: BTreeMap<&str, usize> = BTreeMap::new();
            for &j in neighbors {
                *votes.entry(m.labels[j].as_str()).or_insert(0) += 1;
            }
            let top = *votes.values().max().expect("k >= 1");
            let predicted = neighbors
                .iter()
                .map(|&j| m.labels[j].as_str())
                .find(|label| votes[label] == top)
                .expect("some neighbor holds the top label");
            usize::from(predicted == m.labels[i])
        })
        .sum();
    Ok(correct as f64 / size as f64)
}

/// Mean leave-one-out kNN accuracy over `iterations` random subsets of the
/// corpus. Subsets are drawn without replacement from a generator seeded
/// with `seed`, so results are reproducible.
pub fn subset_knn_experiment(
    m: &DistanceMatrix,
    subset_size: usize,
    iterations: usize,
    k: usize,
    seed: u64,
) -> Result<f64, EvalError> {
    validate_subset(m.len(), subset_size, k)?;
    if iterations == 0 {
        return Err(EvalError::NoIterations);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..iterations {
        let mut idx = rand::seq::index::sample(&mut rng, m.len(), subset_size).into_vec();
        idx.sort_unstable();
        total += knn_accuracy(&m.subset(&idx), k)?;
    }
    Ok(total / iterations as f64)
}

/// Mean within/between separation over random subsets, re-normalizing the
/// z-scores inside each subset (the statistics a smaller corpus would see).
pub fn subset_intra_inter(
    m: &DistanceMatrix,
    subset_size: usize,
    iterations: usize,
    seed: u64,
) -> Result<(f64, f64), EvalError> {
    validate_subset(m.len(), subset_size, 1)?;
    if iterations == 0 {
        return Err(EvalError::NoIterations);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut intra_total, mut inter_total) = (0.0, 0.0);
    for _ in 0..iterations {
        let mut idx = rand::seq::index::sample(&mut rng, m.len(), subset_size).into_vec();
        idx.sort_unstable();
        let (intra, inter) = intra_inter(&normalize_zscores(&m.subset(&idx))?)?;
        intra_total += intra;
        inter_total += inter;
    }
    Ok((intra_total / iterations as f64, inter_total / iterations as f64))
}

fn validate_subset(items: usize, subset_size: usize, k: usize) -> Result<(), EvalError> {
    if subset_size < 2 || subset_size > items || k >= subset_size {
        return Err(EvalError::BadSubset { size: subset_size, items, k });
    }
    Ok(())
}

/// Mean normalized distance from each snapshot to its temporal neighbors
/// (previous and next in the given order). `snapshot_ids` must name rows of
/// the matrix; the order given is the temporal order.
pub fn temporal_neighbor_distance(
    nm: &NormalizedMatrix,
    snapshot_ids: &[String],
) -> Result<Vec<(String, f64)>, EvalError> {
    if snapshot_ids.len() < 2 {
        return Err(EvalError::TooFewSnapshots(snapshot_ids.len()));
    }
    let index_of = |id: &String| {
        nm.ids.iter().position(|x| x == id).ok_or_else(|| EvalError::UnknownSnapshot(id.clone()))
    };
    let rows: Vec<usize> = snapshot_ids.iter().map(index_of).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(rows.len());
    for (s, &row) in rows.iter().enumerate() {
        let mut sum = 0.0;
        let mut n = 0.0;
        if s > 0 {
            sum += nm.get(row, rows[s - 1]);
            n += 1.0;
        }
        if s + 1 < rows.len() {
            sum += nm.get(row, rows[s + 1]);
            n += 1.0;
        }
        out.push((snapshot_ids[s].clone(), sum / n));
    }
    Ok(out)
}

/// One cell of a parameter sweep: the separation statistics at a given
/// (α, γ) with fixed β.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub alpha: f64,
    pub gamma: f64,
    pub intra: f64,
    pub inter: f64,
}

/// Evaluates within/between separation over a grid of α and γ values at a
/// fixed β. Quantifications and per-level L1 sums are computed once per α;
/// each γ cell only recombines the level sums with its own discount
/// weights, so the grid costs little more than a single evaluation per α.
pub fn parameter_sweep(
    items: &[LabeledGraph],
    alphas: &[f64],
    gammas: &[f64],
    beta: u32,
) -> Result<Vec<SweepCell>, EvalError> {
    if alphas.is_empty() || gammas.is_empty() {
        return Err(EvalError::EmptySweepGrid);
    }
    if items.len() < 2 {
        return Err(EvalError::TooFewItems(items.len()));
    }
    let dds = distributions(items)?;
    let ids: Vec<String> = items.iter().map(|it| it.instance_id.clone()).collect();
    let labels: Vec<String> = items.iter().map(|it| it.label.clone()).collect();
    let pairs = ordered_pairs(items.len());
    let mut cells = Vec::with_capacity(alphas.len() * gammas.len());
    for &alpha in alphas {
        let base = QuantizationParams { alpha, beta, gamma: gammas[0] };
        base.validate()?;
        for &gamma in gammas {
            QuantizationParams { alpha, beta, gamma }.validate()?;
        }
        let mut level: Vec<Vec<f64>> =
            dds.par_iter().map(|dd| quantify(dd, &base).idp).collect();
        // level_l1[c][p]: L1 between pair p's vectors after c coarsenings.
        let mut level_l1: Vec<Vec<f64>> = Vec::with_capacity(beta as usize + 1);
        for c in 0..=beta {
            level_l1.push(
                pairs
                    .par_iter()
                    .map(|&(i, j)| {
                        level[i].iter().zip(&level[j]).map(|(x, y)| (x - y).abs()).sum()
                    })
                    .collect(),
            );
            if c < beta {
                level = level
                    .iter()
                    .map(|v| v.chunks_exact(2).map(|w| w[0] + w[1]).collect())
                    .collect();
            }
        }
        for &gamma in gammas {
            let mut matrix = DistanceMatrix::zeros(
                ids.clone(),
                labels.clone(),
                Method::Ddqc,
                Some(QuantizationParams { alpha, beta, gamma }),
            );
            for (p, &(i, j)) in pairs.iter().enumerate() {
                // c coarsenings leave granularity level β − c, weighted γ^(β−c).
                let d: f64 = (0..=beta)
                    .map(|c| gamma.powi((beta - c) as i32) * level_l1[c as usize][p])
                    .sum();
                matrix.set_symmetric(i, j, d);
            }
            let (intra, inter) = intra_inter(&normalize_zscores(&matrix)?)?;
            cells.push(SweepCell { alpha, gamma, intra, inter });
        }
    }
    Ok(cells)
}

/// Per-method results inside an evaluation report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct MethodReport {
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub knn_accuracy: BTreeMap<usize, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intra: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inter: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TemporalPoint {
    pub id: String,
    pub mean_neighbor_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityPoint {
    pub size: usize,
    pub intra: f64,
    pub inter: f64,
}

/// Serializable evaluation output covering every experiment the CLI runs.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationReport {
    pub experiment: String,
    pub alpha: f64,
    pub beta: u32,
    pub gamma: f64,
    pub seed: u64,
    /// Distance method behind the temporal/stability series (those
    /// experiments run one method at a time).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub methods: BTreeMap<String, MethodReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepCell>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temporal: Option<Vec<TemporalPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<Vec<StabilityPoint>>,
}

impl EvaluationReport {
    pub fn new(experiment: &str, params: &QuantizationParams, seed: u64) -> Self {
        EvaluationReport {
            experiment: experiment.to_string(),
            alpha: params.alpha,
            beta: params.beta,
            gamma: params.gamma,
            seed,
            method: None,
            methods: BTreeMap::new(),
            sweep: None,
            temporal: None,
            stability: None,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Tidy rows: `experiment,method,param,value`, one statistic per line.
    pub fn to_tidy_csv(&self) -> String {
        let mut rows: Vec<[String; 4]> = Vec::new();
        for (method, r) in &self.methods {
            for (&k, &acc) in &r.knn_accuracy {
                rows.push([self.experiment.clone(), method.clone(), format!("K={k}"), fmt_f64(acc)]);
            }
            if let Some(v) = r.intra {
                rows.push([self.experiment.clone(), method.clone(), "intra".into(), fmt_f64(v)]);
            }
            if let Some(v) = r.inter {
                rows.push([self.experiment.clone(), method.clone(), "inter".into(), fmt_f64(v)]);
            }
        }
        if let Some(sweep) = &self.sweep {
            for cell in sweep {
                let at = format!("alpha={},gamma={}", fmt_f64(cell.alpha), fmt_f64(cell.gamma));
                rows.push([
                    self.experiment.clone(),
                    "ddqc".into(),
                    format!("{at},intra"),
                    fmt_f64(cell.intra),
                ]);
                rows.push([
                    self.experiment.clone(),
                    "ddqc".into(),
                    format!("{at},inter"),
                    fmt_f64(cell.inter),
                ]);
            }
        }
        let single = self.method.clone().unwrap_or_else(|| "ddqc".into());
        if let Some(temporal) = &self.temporal {
            for point in temporal {
                rows.push([
                    self.experiment.clone(),
                    single.clone(),
                    point.id.clone(),
                    fmt_f64(point.mean_neighbor_distance),
                ]);
            }
        }
        if let Some(stability) = &self.stability {
            for point in stability {
                let at = format!("size={}", point.size);
                rows.push([self.experiment.clone(), single.clone(), format!("{at},intra"), fmt_f64(point.intra)]);
                rows.push([self.experiment.clone(), single.clone(), format!("{at},inter"), fmt_f64(point.inter)]);
            }
        }
        let mut out = String::from("experiment,method,param,value\n");
        for row in rows {
            let quoted: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&quoted.join(","));
            out.push('\n');
        }
        out
    }
}

fn fmt_f64(v: f64) -> String {
    // Shortest round-trip representation; stable across runs.
    format!("{v}")
}

fn csv_field(f: &str) -> String {
    if f.contains(',') || f.contains('"') || f.contains('\n') {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}
