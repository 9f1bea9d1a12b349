//! Synthetic graph generators and labeled corpus construction.
//!
//! Eight generative families are covered: preferential attachment,
//! copying/duplication, Erdős–Rényi, forest fire, stochastic Kronecker,
//! Chung–Lu with power-law weights, Watts–Strogatz, and random regular.
//! Every generator is a pure function of its parameters and a `u64` seed;
//! the same inputs always reproduce the same graph, byte for byte.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("{model} generator: {reason}")]
    InvalidParameter { model: Model, reason: String },
    #[error("random regular matching failed to converge")]
    MatchingDidNotConverge,
}

fn invalid(model: Model, reason: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidParameter { model, reason: reason.into() }
}

/// The generative families, in canonical label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Barabási–Albert preferential attachment.
    Ba,
    /// Copying (duplication) model.
    Cm,
    /// Erdős–Rényi G(n, p).
    Er,
    /// Forest fire.
    Ff,
    /// Stochastic Kronecker with a 2×2 initiator.
    Kg,
    /// Chung–Lu random graph with power-law expected degrees.
    Rp,
    /// Watts–Strogatz small world.
    Ws,
    /// Random k-regular.
    Rg,
}

impl Model {
    pub const ALL: [Model; 8] =
        [Model::Ba, Model::Cm, Model::Er, Model::Ff, Model::Kg, Model::Rp, Model::Ws, Model::Rg];

    pub fn name(self) -> &'static str {
        match self {
            Model::Ba => "ba",
            Model::Cm => "cm",
            Model::Er => "er",
            Model::Ff => "ff",
            Model::Kg => "kg",
            Model::Rp => "rp",
            Model::Ws => "ws",
            Model::Rg => "rg",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model '{s}' (expected one of ba, cm, er, ff, kg, rp, ws, rg)"))
    }
}

/// Model-specific parameters. Serialized as a flat JSON object; the model
/// tag lives alongside it (e.g. in a manifest column), so parsing goes
/// through [`ModelParams::from_json`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelParams {
    Ba { k: u32 },
    Cm { k: u32, beta: f64 },
    Er { density: f64 },
    Ff { p: f64, pb: f64 },
    Kg { initiator: [[f64; 2]; 2], k_power: u32 },
    Rp { gamma_exp: f64 },
    Ws { k: u32, rewire: f64 },
    Rg { k: u32 },
}

impl ModelParams {
    /// Parses the flat parameter object for a known model.
    pub fn from_json(model: Model, json: &str) -> Result<Self, serde_json::Error> {
        #[derive(Deserialize)]
        struct BaP {
            k: u32,
        }
        #[derive(Deserialize)]
        struct CmP {
            k: u32,
            beta: f64,
        }
        #[derive(Deserialize)]
        struct ErP {
            density: f64,
        }
        #[derive(Deserialize)]
        struct FfP {
            p: f64,
            pb: f64,
        }
        #[derive(Deserialize)]
        struct KgP {
            initiator: [[f64; 2]; 2],
            k_power: u32,
        }
        #[derive(Deserialize)]
        struct RpP {
            gamma_exp: f64,
        }
        #[derive(Deserialize)]
        struct WsP {
            k: u32,
            rewire: f64,
        }
        #[derive(Deserialize)]
        struct RgP {
            k: u32,
        }
        Ok(match model {
            Model::Ba => {
                let p: BaP = serde_json::from_str(json)?;
                ModelParams::Ba { k: p.k }
            }
            Model::Cm => {
                let p: CmP = serde_json::from_str(json)?;
                ModelParams::Cm { k: p.k, beta: p.beta }
            }
            Model::Er => {
                let p: ErP = serde_json::from_str(json)?;
                ModelParams::Er { density: p.density }
            }
            Model::Ff => {
                let p: FfP = serde_json::from_str(json)?;
                ModelParams::Ff { p: p.p, pb: p.pb }
            }
            Model::Kg => {
                let p: KgP = serde_json::from_str(json)?;
                ModelParams::Kg { initiator: p.initiator, k_power: p.k_power }
            }
            Model::Rp => {
                let p: RpP = serde_json::from_str(json)?;
                ModelParams::Rp { gamma_exp: p.gamma_exp }
            }
            Model::Ws => {
                let p: WsP = serde_json::from_str(json)?;
                ModelParams::Ws { k: p.k, rewire: p.rewire }
            }
            Model::Rg => {
                let p: RgP = serde_json::from_str(json)?;
                ModelParams::Rg { k: p.k }
            }
        })
    }
}

/// A fully specified generation job: model, parameters, size, and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub model: Model,
    pub params: ModelParams,
    pub n_nodes: usize,
    pub seed: u64,
}

impl ModelSpec {
    pub fn generate(&self) -> Result<Graph, GeneratorError> {
        let n = self.n_nodes;
        let seed = self.seed;
        match self.params {
            ModelParams::Ba { k } => gen_ba(n, k, seed),
            ModelParams::Cm { k, beta } => gen_copying(n, k, beta, seed),
            ModelParams::Er { density } => gen_er(n, density, seed),
            ModelParams::Ff { p, pb } => gen_forest_fire(n, p, pb, seed),
            ModelParams::Kg { initiator, k_power } => gen_kronecker(&initiator, k_power, seed),
            ModelParams::Rp { gamma_exp } => gen_random_powerlaw(n, gamma_exp, seed),
            ModelParams::Ws { k, rewire } => gen_ws(n, k, rewire, seed),
            ModelParams::Rg { k } => gen_regular(n, k, seed),
        }
    }
}

/// A generated graph with its class label and provenance.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub label: String,
    pub instance_id: String,
    pub spec: Option<ModelSpec>,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of failures before the first success when each trial succeeds
/// with probability `1 - p`, i.e. P(K = k) = (1 − p)·p^k with mean
/// p/(1 − p). Returns 0 for p ≤ 0 and `cap` for p ≥ 1.
fn geometric_count<R: Rng>(rng: &mut R, p: f64, cap: u64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return cap;
    }
    let u: f64 = rng.random();
    if u == 0.0 {
        return cap;
    }
    // P(K ≥ k) = p^k, so K = floor(ln U / ln p) inverts the tail CDF.
    let k = (u.ln() / p.ln()).floor();
    (k as u64).min(cap)
}

/// Draws from the discrete power law P(d) ∝ d^(−γ) for d ≥ d_min via the
/// rounded continuous Pareto: `floor((d_min − ½)(1 − u)^(−1/(γ−1)) + ½)`.
pub fn sample_discrete_powerlaw<R: Rng>(rng: &mut R, gamma: f64, d_min: u32) -> u64 {
    let xm = d_min as f64 - 0.5;
    let u: f64 = rng.random();
    let y = xm * (1.0 - u).powf(-1.0 / (gamma - 1.0)) + 0.5;
    if y >= u64::MAX as f64 {
        u64::MAX
    } else {
        y as u64
    }
}

fn choose_distinct<R: Rng>(rng: &mut R, pool_len: usize, k: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, pool_len, k).into_vec()
}

/// Preferential attachment: start from a (k+1)-clique, then attach each new
/// node to `k` distinct existing nodes sampled proportionally to degree
/// (via a repeated-endpoints pool).
pub fn gen_ba(n: usize, k: u32, seed: u64) -> Result<Graph, GeneratorError> {
    if k < 1 || (k as usize) >= n {
        return Err(invalid(Model::Ba, format!("requires 1 <= k < n, got k={k}, n={n}")));
    }
    let mut rng = rng_for(seed);
    let k = k as usize;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(k * (k + 1) / 2 + (n - k - 1) * k);
    // One pool entry per edge endpoint makes uniform pool sampling
    // equivalent to degree-proportional node sampling.
    let mut pool: Vec<u32> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=(k as u32) {
        for v in (u + 1)..=(k as u32) {
            edges.push((u, v));
            pool.push(u);
            pool.push(v);
        }
    }
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    for v in (k + 1)..n {
        chosen.clear();
        while chosen.len() < k {
            let t = pool[rng.random_range(0..pool.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, v as u32));
            pool.push(t);
            pool.push(v as u32);
        }
    }
    Ok(Graph::new(n, edges).expect("endpoints in range by construction"))
}

/// Copying model: start from a (k+1)-clique; each new node either picks `k`
/// uniform existing targets (probability `beta`) or copies `k` neighbors of
/// a uniformly chosen prototype, falling back to uniform targets when the
/// prototype has fewer than `k` neighbors.
pub fn gen_copying(n: usize, k: u32, beta: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if k < 1 || (k as usize) >= n {
        return Err(invalid(Model::Cm, format!("requires 1 <= k < n, got k={k}, n={n}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid(Model::Cm, format!("requires 0 < beta < 1, got {beta}")));
    }
    let mut rng = rng_for(seed);
    let k = k as usize;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(k * (k + 1) / 2 + (n - k - 1) * k);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let connect = |edges: &mut Vec<(u32, u32)>, adj: &mut Vec<Vec<u32>>, u: u32, v: u32| {
        edges.push((u, v));
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    };
    for u in 0..=(k as u32) {
        for v in (u + 1)..=(k as u32) {
            connect(&mut edges, &mut adj, u, v);
        }
    }
    for v in (k + 1)..n {
        let uniform_step = rng.random::<f64>() < beta;
        let targets: Vec<u32> = if uniform_step {
            choose_distinct(&mut rng, v, k).into_iter().map(|t| t as u32).collect()
        } else {
            let proto = rng.random_range(0..v);
            let neighbors = &adj[proto];
            if neighbors.len() >= k {
                choose_distinct(&mut rng, neighbors.len(), k).into_iter().map(|i| neighbors[i]).collect()
            } else {
                choose_distinct(&mut rng, v, k).into_iter().map(|t| t as u32).collect()
            }
        };
        for t in targets {
            connect(&mut edges, &mut adj, t, v as u32);
        }
    }
    Ok(Graph::new(n, edges).expect("endpoints in range by construction"))
}

/// Maps a linear index into the ordered-pair space {(i, j) : i < j < n}
/// back to the pair, where pairs are ranked row by row.
fn pair_from_index(n: u64, idx: u64) -> (u32, u32) {
    // offset(i) = pairs in rows before i = i(n-1) - i(i-1)/2.
    let offset = |i: u64| i * (n - 1) - i * i.saturating_sub(1) / 2;
    let nf = n as f64;
    let disc = (2.0 * nf - 1.0).powi(2) - 8.0 * idx as f64;
    let mut i = (((2.0 * nf - 1.0) - disc.max(0.0).sqrt()) / 2.0).floor() as u64;
    i = i.min(n - 2);
    while offset(i) > idx {
        i -= 1;
    }
    while i + 1 < n && offset(i + 1) <= idx {
        i += 1;
    }
    let j = i + 1 + (idx - offset(i));
    debug_assert!(j < n);
    (i as u32, j as u32)
}

/// G(n, p) with `p = density`, sampled by geometric skips through the pair
/// index space so the cost is proportional to the expected edge count.
pub fn gen_er(n: usize, density: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(invalid(Model::Er, format!("requires 0 < density <= 1, got {density}")));
    }
    if n < 1 {
        return Err(invalid(Model::Er, "requires n >= 1"));
    }
    let total = (n as u64) * (n as u64 - 1) / 2;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    if density >= 1.0 {
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                edges.push((i, j));
            }
        }
        return Ok(Graph::new(n, edges).expect("endpoints in range"));
    }
    let mut rng = rng_for(seed);
    let ln_q = (1.0 - density).ln();
    let mut idx: u64 = 0;
    loop {
        let u: f64 = rng.random();
        // Skip length ~ Geometric(density): floor(ln U / ln(1-p)).
        let skip = if u == 0.0 { u64::MAX } else { (u.ln() / ln_q) as u64 };
        idx = idx.saturating_add(skip);
        if idx >= total {
            break;
        }
        edges.push(pair_from_index(n as u64, idx));
        idx += 1;
        if idx >= total {
            break;
        }
    }
    Ok(Graph::new(n, edges).expect("endpoints in range"))
}

/// Forest fire: each new node picks a uniform ambassador and "burns"
/// through the existing graph by BFS, drawing at every burned node a
/// geometric number of forward (out-link, mean p/(1−p)) and backward
/// (in-link, mean pb/(1−pb)) unvisited neighbors to burn next. The new node
/// links to every burned node. Directions only steer the burn; the result
/// is projected to an undirected graph.
pub fn gen_forest_fire(n: usize, p: f64, pb: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if !(0.0..1.0).contains(&p) {
        return Err(invalid(Model::Ff, format!("requires 0 <= p < 1, got {p}")));
    }
    if !(0.0..1.0).contains(&pb) {
        return Err(invalid(Model::Ff, format!("requires 0 <= pb < 1, got {pb}")));
    }
    if n < 1 {
        return Err(invalid(Model::Ff, "requires n >= 1"));
    }
    let mut rng = rng_for(seed);
    let mut out_links: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut in_links: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edges: Vec<(u32, u32)> = Vec::new();
    // visited_round[u] == v marks u as burned during node v's arrival,
    // avoiding a fresh visited set per node.
    let mut visited_round: Vec<usize> = vec![usize::MAX; n];
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut burned: Vec<u32> = Vec::new();
    for v in 1..n {
        let ambassador = rng.random_range(0..v) as u32;
        queue.clear();
        burned.clear();
        visited_round[ambassador as usize] = v;
        queue.push_back(ambassador);
        burned.push(ambassador);
        while let Some(w) = queue.pop_front() {
            let forward = geometric_count(&mut rng, p, v as u64);
            let backward = geometric_count(&mut rng, pb, v as u64);
            for (links, want) in [(&out_links[w as usize], forward), (&in_links[w as usize], backward)] {
                if want == 0 {
                    continue;
                }
                let candidates: Vec<u32> =
                    links.iter().copied().filter(|&x| visited_round[x as usize] != v).collect();
                let take = (want as usize).min(candidates.len());
                if take == 0 {
                    continue;
                }
                for idx in choose_distinct(&mut rng, candidates.len(), take) {
                    let x = candidates[idx];
                    visited_round[x as usize] = v;
                    queue.push_back(x);
                    burned.push(x);
                }
            }
        }
        for &b in &burned {
            out_links[v].push(b);
            in_links[b as usize].push(v as u32);
            edges.push((b, v as u32));
        }
    }
    Ok(Graph::new(n, edges).expect("endpoints in range"))
}

/// Stochastic Kronecker graph on `n = 2^k_power` nodes. The probability of
/// edge {u, v} (u < v) is the product over bit positions of the initiator
/// entry selected by the corresponding bits of u and v.
pub fn gen_kronecker(initiator: &[[f64; 2]; 2], k_power: u32, seed: u64) -> Result<Graph, GeneratorError> {
    for row in initiator {
        for &p in row {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(invalid(Model::Kg, format!("initiator entries must be in [0, 1], got {p}")));
            }
        }
    }
    if !(1..=30).contains(&k_power) {
        return Err(invalid(Model::Kg, format!("requires 1 <= k_power <= 30, got {k_power}")));
    }
    let n: u64 = 1 << k_power;
    let kp = k_power as usize;
    // pow[b][c] = initiator[...][...]^c for bit pattern b ∈ {00, 01, 10, 11};
    // the pair probability is then a table lookup per bit-pattern count.
    let mut pow = [[0.0f64; 31]; 4];
    let bases = [initiator[0][0], initiator[0][1], initiator[1][0], initiator[1][1]];
    for (b, &base) in bases.iter().enumerate() {
        pow[b][0] = 1.0;
        for c in 1..=kp {
            pow[b][c] = pow[b][c - 1] * base;
        }
    }
    let mask: u64 = n - 1;
    let mut rng = rng_for(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let c11 = (u & v).count_ones() as usize;
            let c10 = (u & !v & mask).count_ones() as usize;
            let c01 = (!u & v & mask).count_ones() as usize;
            let c00 = kp - c11 - c10 - c01;
            let p = pow[0][c00] * pow[1][c01] * pow[2][c10] * pow[3][c11];
            if rng.random::<f64>() < p {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Ok(Graph::new(n as usize, edges).expect("endpoints in range"))
}

/// Chung–Lu random graph with power-law expected degrees: node weights are
/// drawn from P(w) ∝ w^(−γ) for w ≥ 1 (capped at n), and each pair {u, v}
/// is an edge independently with probability min(1, w_u·w_v / Σw).
pub fn gen_random_powerlaw(n: usize, gamma_exp: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if !gamma_exp.is_finite() || gamma_exp <= 2.0 {
        return Err(invalid(Model::Rp, format!("requires gamma_exp > 2, got {gamma_exp}")));
    }
    if n < 1 {
        return Err(invalid(Model::Rp, "requires n >= 1"));
    }
    let mut rng = rng_for(seed);
    let weights: Vec<f64> =
        (0..n).map(|_| sample_discrete_powerlaw(&mut rng, gamma_exp, 1).min(n as u64) as f64).collect();
    let total: f64 = weights.iter().sum();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = (weights[u] * weights[v] / total).min(1.0);
            if rng.random::<f64>() < p {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Ok(Graph::new(n, edges).expect("endpoints in range"))
}

/// Watts–Strogatz small world: a ring lattice where each node connects to
/// `k/2` neighbors on each side, then every lattice edge is rewired with
/// probability `rewire` to a uniform non-duplicate, non-self target.
pub fn gen_ws(n: usize, k: u32, rewire: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if k < 2 || !k.is_multiple_of(2) || (k as usize) >= n {
        return Err(invalid(Model::Ws, format!("requires even k with 2 <= k < n, got k={k}, n={n}")));
    }
    if !(0.0..=1.0).contains(&rewire) {
        return Err(invalid(Model::Ws, format!("requires 0 <= rewire <= 1, got {rewire}")));
    }
    let mut rng = rng_for(seed);
    let half = (k / 2) as usize;
    let norm = |a: u32, b: u32| if a <= b { (a, b) } else { (b, a) };
    let mut edge_set: HashSet<(u32, u32)> = HashSet::new();
    let mut degree: Vec<usize> = vec![0; n];
    for i in 0..n {
        for off in 1..=half {
            let j = ((i + off) % n) as u32;
            edge_set.insert(norm(i as u32, j));
            degree[i] += 1;
            degree[j as usize] += 1;
        }
    }
    if rewire > 0.0 {
        for i in 0..n {
            for off in 1..=half {
                let j = ((i + off) % n) as u32;
                if rng.random::<f64>() >= rewire {
                    continue;
                }
                // A node adjacent to everyone has no valid new target.
                if degree[i] >= n - 1 {
                    continue;
                }
                let t = loop {
                    let t = rng.random_range(0..n) as u32;
                    if t as usize != i && !edge_set.contains(&norm(i as u32, t)) {
                        break t;
                    }
                };
                edge_set.remove(&norm(i as u32, j));
                degree[j as usize] -= 1;
                edge_set.insert(norm(i as u32, t));
                degree[t as usize] += 1;
            }
        }
    }
    let edges: Vec<(u32, u32)> = edge_set.into_iter().collect();
    Ok(Graph::new(n, edges).expect("endpoints in range"))
}

/// Random k-regular graph via stub matching: shuffle all stubs, pair them
/// up, keep the valid pairs, and reshuffle the leftovers while a completing
/// match is still possible; restart from scratch otherwise.
pub fn gen_regular(n: usize, k: u32, seed: u64) -> Result<Graph, GeneratorError> {
    if (k as usize) >= n {
        return Err(invalid(Model::Rg, format!("requires k < n, got k={k}, n={n}")));
    }
    if !(n * k as usize).is_multiple_of(2) {
        return Err(invalid(Model::Rg, format!("requires n*k even, got n={n}, k={k}")));
    }
    if k == 0 {
        return Ok(Graph::new(n, Vec::new()).expect("no edges"));
    }
    let mut rng = rng_for(seed);
    let norm = |a: u32, b: u32| if a <= b { (a, b) } else { (b, a) };
    // With k < n and n·k even a k-regular graph always exists, so repeated
    // attempts succeed with probability 1; the cap only guards against a
    // logic regression turning this into an infinite loop.
    for _attempt in 0..10_000 {
        let mut edge_set: HashSet<(u32, u32)> = HashSet::new();
        let mut stubs: Vec<u32> =
            (0..n as u32).flat_map(|v| std::iter::repeat_n(v, k as usize)).collect();
        let success = loop {
            stubs.shuffle(&mut rng);
            let mut leftover: Vec<u32> = Vec::new();
            for pair in stubs.chunks_exact(2) {
                let e = norm(pair[0], pair[1]);
                if e.0 != e.1 && !edge_set.contains(&e) {
                    edge_set.insert(e);
                } else {
                    leftover.push(pair[0]);
                    leftover.push(pair[1]);
                }
            }
            if leftover.is_empty() {
                break true;
            }
            // The retry is only worthwhile if some leftover pair is still
            // placeable; otherwise restart with a fresh matching.
            let mut remaining: Vec<u32> = leftover.clone();
            remaining.sort_unstable();
            remaining.dedup();
            let suitable = remaining.iter().enumerate().any(|(a, &u)| {
                remaining[..a].iter().any(|&w| !edge_set.contains(&norm(u, w)))
            });
            if !suitable {
                break false;
            }
            stubs = leftover;
        };
        if success {
            let edges: Vec<(u32, u32)> = edge_set.into_iter().collect();
            return Ok(Graph::new(n, edges).expect("endpoints in range"));
        }
    }
    Err(GeneratorError::MatchingDidNotConverge)
}

/// Default corpus size range.
pub const DEFAULT_N_RANGE: (usize, usize) = (1000, 5000);

fn uniform_in<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + rng.random::<f64>() * (hi - lo)
}

fn uniform_open_low<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let x = uniform_in(rng, lo, hi);
        if x > lo {
            return x;
        }
    }
}

/// Powers of two inside `[lo, hi]`; when none fit, the power closest to the
/// midpoint so Kronecker sizes stay near the requested range.
fn kronecker_powers(lo: usize, hi: usize) -> Vec<u32> {
    let in_range: Vec<u32> = (1..=30).filter(|&k| (1usize << k) >= lo && (1usize << k) <= hi).collect();
    if !in_range.is_empty() {
        return in_range;
    }
    let mid = (lo + hi) as f64 / 2.0;
    let best = (1..=30u32)
        .min_by(|&a, &b| {
            let da = ((1u64 << a) as f64 - mid).abs();
            let db = ((1u64 << b) as f64 - mid).abs();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    vec![best]
}

/// Draws a full generation job for `model` with node counts in `n_range`,
/// using the documented per-model parameter ranges.
pub fn sample_params_in<R: Rng>(model: Model, n_range: (usize, usize), rng: &mut R) -> ModelSpec {
    let (n_lo, n_hi) = n_range;
    assert!(n_lo >= 12 && n_lo <= n_hi, "node range must satisfy 12 <= lo <= hi");
    let mut n = rng.random_range(n_lo..=n_hi);
    let params = match model {
        Model::Ba => ModelParams::Ba { k: rng.random_range(1..=10) },
        Model::Cm => {
            ModelParams::Cm { k: rng.random_range(1..=10), beta: uniform_open_low(rng, 0.0, 1.0) }
        }
        Model::Er => ModelParams::Er { density: uniform_in(rng, 0.002, 0.005) },
        Model::Ff => ModelParams::Ff { p: uniform_in(rng, 0.0, 0.3), pb: 0.32 },
        Model::Kg => {
            let initiator = [
                [uniform_in(rng, 0.7, 0.9), uniform_in(rng, 0.5, 0.7)],
                [uniform_in(rng, 0.4, 0.6), uniform_in(rng, 0.2, 0.4)],
            ];
            let powers = kronecker_powers(n_lo, n_hi);
            let k_power = powers[rng.random_range(0..powers.len())];
            n = 1usize << k_power;
            ModelParams::Kg { initiator, k_power }
        }
        Model::Rp => ModelParams::Rp { gamma_exp: uniform_open_low(rng, 2.5, 3.0) },
        Model::Ws => ModelParams::Ws { k: 2 * rng.random_range(1..=5), rewire: 0.5 },
        Model::Rg => {
            let k = rng.random_range(2..=10);
            if !(n * k as usize).is_multiple_of(2) {
                // n and k both odd: nudge n to the nearest even-product
                // size without leaving the range.
                if n < n_hi {
                    n += 1;
                } else {
                    n -= 1;
                }
            }
            ModelParams::Rg { k }
        }
    };
    ModelSpec { model, params, n_nodes: n, seed: rng.next_u64() }
}

/// [`sample_params_in`] over the default size range.
pub fn sample_params<R: Rng>(model: Model, rng: &mut R) -> ModelSpec {
    sample_params_in(model, DEFAULT_N_RANGE, rng)
}

/// Samples one generation job deterministically from `seed`.
pub fn sample_spec(model: Model, n_range: (usize, usize), seed: u64) -> ModelSpec {
    sample_params_in(model, n_range, &mut rng_for(seed))
}

/// splitmix64 finalizer: decorrelates per-instance seeds derived from one
/// master seed.
fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn generate_instance(model: Model, model_idx: usize, instance_idx: usize, per_model: usize, n_range: (usize, usize), master_seed: u64) -> LabeledGraph {
    let global = (model_idx * per_model + instance_idx) as u64;
    let mut rng = rng_for(derive_seed(master_seed, global));
    let mut spec = sample_params_in(model, n_range, &mut rng);
    spec.seed = rng.next_u64();
    let graph = spec.generate().expect("sampled parameters are always valid");
    LabeledGraph {
        graph,
        label: model.name().to_string(),
        instance_id: format!("{}_{:04}", model.name(), instance_idx),
        spec: Some(spec),
    }
}

/// Generates `per_model` labeled instances for each model with node counts
/// in `n_range`. Each instance derives its own seed from `master_seed` and
/// its position, so the output is reproducible, order-stable, and identical
/// whether generation runs sequentially or in parallel.
pub fn generate_dataset_with(
    models: &[Model],
    per_model: usize,
    n_range: (usize, usize),
    master_seed: u64,
) -> Vec<LabeledGraph> {
    let jobs: Vec<(usize, Model, usize)> = models
        .iter()
        .enumerate()
        .flat_map(|(mi, &m)| (0..per_model).map(move |i| (mi, m, i)))
        .collect();
    jobs.into_par_iter()
        .map(|(mi, m, i)| generate_instance(m, mi, i, per_model, n_range, master_seed))
        .collect()
}

/// [`generate_dataset_with`] over the default size range.
pub fn generate_dataset(models: &[Model], per_model: usize, master_seed: u64) -> Vec<LabeledGraph> {
    generate_dataset_with(models, per_model, DEFAULT_N_RANGE, master_seed)
}
