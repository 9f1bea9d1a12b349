//! `ddqc`: quantify, compare, generate, and evaluate networks by their
//! degree distributions.
//!
//! Every command is deterministic: identical inputs, flags, and seeds
//! produce byte-identical output. Exit codes: 0 success, 1 domain or
//! evaluation error, 2 I/O or parse error.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ddqc::baselines::{percentiles_distance, percentiles_quantify, powerlaw_distance};
use ddqc::dataset::{self, DatasetError};
use ddqc::evaluation::{
    intra_inter, knn_accuracy, normalize_zscores, pairwise_distances, parameter_sweep,
    subset_intra_inter, subset_knn_experiment, temporal_neighbor_distance, EvalError,
    EvaluationReport, Method, StabilityPoint, TemporalPoint,
};
use ddqc::generators::{
    generate_dataset_with, sample_spec, GeneratorError, Model, ModelParams, ModelSpec,
    DEFAULT_N_RANGE,
};
use ddqc::graph::{load_edge_list_path, GraphError};
use ddqc::ks_distance;
use ddqc::quantify::{ddqc_distance, quantify, QuantificationError, QuantizationParams};
use ddqc::stats::StatsError;
use ddqc::DegreeDistribution;

#[derive(Parser)]
#[command(
    name = "ddqc",
    version,
    about = "Degree-distribution quantification and comparison for networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantify one graph's degree distribution into a feature vector
    Quantify(QuantifyArgs),
    /// Print the distance between two graphs' degree distributions
    Compare(CompareArgs),
    /// Generate a synthetic graph or a labeled corpus
    Generate(GenerateArgs),
    /// Run a corpus-level evaluation experiment over a manifest
    Evaluate(EvaluateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Ddqc,
    Ks,
    Powerlaw,
    Percentiles,
    /// Run every method
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Ddqc => vec![Method::Ddqc],
            MethodArg::Ks => vec![Method::Ks],
            MethodArg::Powerlaw => vec![Method::Powerlaw],
            MethodArg::Percentiles => vec![Method::Percentiles],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }

    fn single(self, context: &str) -> Result<Method, CliError> {
        match self.methods().as_slice() {
            [one] => Ok(*one),
            _ => Err(CliError::Domain(format!("{context} needs a single --method, not 'all'"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Knn,
    Interintra,
    Temporal,
    Sweep,
    Stability,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Knn => "knn",
            Experiment::Interintra => "interintra",
            Experiment::Temporal => "temporal",
            Experiment::Sweep => "sweep",
            Experiment::Stability => "stability",
        }
    }
}

#[derive(Args)]
struct QuantifyArgs {
    /// Edge-list file (`u v` per line; `#`/`%` comments allowed)
    graph: PathBuf,
    /// Region width multiplier
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Granularity exponent (2^beta intervals per region)
    #[arg(long, default_value_t = 3)]
    beta: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    graph_a: PathBuf,
    graph_b: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 3)]
    beta: u32,
    /// Granularity discount for the ddqc distance
    #[arg(long, default_value_t = 0.8)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Ddqc)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Model: ba, cm, er, ff, kg, rp, ws, rg
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// Generate a full labeled corpus (every model × --per-model)
    #[arg(long)]
    dataset: bool,
    /// Instances per model in dataset mode
    #[arg(long, default_value_t = 5)]
    per_model: usize,
    /// Node count (ignored for kg, whose size is 2^k_power)
    #[arg(long)]
    n: Option<usize>,
    /// Node count range `LO,HI` for dataset mode or --sample
    #[arg(long, value_delimiter = ',')]
    n_range: Vec<usize>,
    /// Restrict dataset mode to these models (comma-separated)
    #[arg(long, value_delimiter = ',', value_parser = parse_model)]
    models: Vec<Model>,
    /// Draw unspecified parameters from the documented per-model ranges
    #[arg(long)]
    sample: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (single graph; stdout if omitted) or directory (dataset)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Attachment/copy/lattice/regular degree parameter (ba, cm, ws, rg)
    #[arg(long)]
    k: Option<u32>,
    /// Uniform-attachment probability for cm
    #[arg(long)]
    beta_cm: Option<f64>,
    /// Edge probability for er
    #[arg(long)]
    density: Option<f64>,
    /// Forward burning parameter for ff
    #[arg(long)]
    p: Option<f64>,
    /// Backward burning parameter for ff
    #[arg(long, default_value_t = 0.32)]
    pb: f64,
    /// Kronecker initiator `P11,P12,P21,P22`
    #[arg(long, value_delimiter = ',')]
    initiator: Vec<f64>,
    /// Kronecker power (graph has 2^k_power nodes)
    #[arg(long)]
    k_power: Option<u32>,
    /// Weight-law exponent for rp
    #[arg(long)]
    gamma_exp: Option<f64>,
    /// Rewiring probability for ws
    #[arg(long, default_value_t = 0.5)]
    rewire: f64,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Manifest CSV (`path,label,model,n,seed,params_json[,timestamp]`)
    manifest: PathBuf,
    #[arg(long, value_enum, default_value_t = Experiment::Knn)]
    experiment: Experiment,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 3)]
    beta: u32,
    #[arg(long, default_value_t = 0.8)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Ddqc)]
    method: MethodArg,
    /// Neighbor count for kNN classification
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random-subset iterations (knn with --subset-size, stability)
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// Evaluate kNN over random subsets of this size instead of the full corpus
    #[arg(long)]
    subset_size: Option<usize>,
    /// Subset sizes for the stability experiment (comma-separated)
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Alpha grid for the sweep experiment (default 0.25,0.5,1,2,4,8)
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Gamma grid for the sweep experiment (default 0.1..2.0 step 0.1)
    #[arg(long, value_delimiter = ',')]
    gammas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Base path: writes BASE.json and BASE.csv instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse()
}

#[derive(Debug)]
enum CliError {
    /// Invalid parameters or an evaluation that cannot proceed (exit 1).
    Domain(String),
    /// Unreadable, unwritable, or unparsable inputs (exit 2).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<QuantificationError> for CliError {
    fn from(e: QuantificationError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Io(e.to_string())
    }
}

fn read_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Quantify(args) => cmd_quantify(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Evaluate(args) => cmd_evaluate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Writes `text` to `out` when given, otherwise to stdout.
fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| read_error(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn load_distribution(path: &Path) -> Result<DegreeDistribution, CliError> {
    let graph = load_edge_list_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(DegreeDistribution::from_degree_sequence(&graph.degree_sequence())?)
}

fn cmd_quantify(args: QuantifyArgs) -> Result<(), CliError> {
    let params = QuantizationParams { alpha: args.alpha, beta: args.beta, ..Default::default() };
    params.validate()?;
    let dd = load_distribution(&args.graph)?;
    let q = quantify(&dd, &params);
    let text = match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "alpha": q.alpha,
                "beta": q.beta,
                "stats": {
                    "n_nodes": dd.n_nodes,
                    "mean": dd.mean,
                    "std": dd.std,
                    "min_degree": dd.min_degree,
                    "max_degree": dd.max_degree,
                },
                "idp": q.idp,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut header =
                vec!["alpha".into(), "beta".into(), "n_nodes".into(), "mean".into(), "std".into(), "min_degree".into(), "max_degree".into()];
            let mut row = vec![
                fmt_f64(q.alpha),
                q.beta.to_string(),
                dd.n_nodes.to_string(),
                fmt_f64(dd.mean),
                fmt_f64(dd.std),
                dd.min_degree.to_string(),
                dd.max_degree.to_string(),
            ];
            for (i, &v) in q.idp.iter().enumerate() {
                header.push(format!("idp_{i}"));
                row.push(fmt_f64(v));
            }
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
    };
    emit(&text, args.out.as_deref())
}

fn distance_one(
    a: &DegreeDistribution,
    b: &DegreeDistribution,
    method: Method,
    params: &QuantizationParams,
) -> Result<f64, CliError> {
    Ok(match method {
        Method::Ddqc => {
            params.validate()?;
            ddqc_distance(&quantify(a, params), &quantify(b, params), params.gamma)?
        }
        Method::Ks => ks_distance(a, b),
        Method::Powerlaw => powerlaw_distance(a, b).map_err(|e| CliError::Domain(e.to_string()))?,
        Method::Percentiles => percentiles_distance(&percentiles_quantify(a), &percentiles_quantify(b)),
    })
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let params = QuantizationParams { alpha: args.alpha, beta: args.beta, gamma: args.gamma };
    let a = load_distribution(&args.graph_a)?;
    let b = load_distribution(&args.graph_b)?;
    let text = match args.method.methods().as_slice() {
        [method] => format!("{}\n", fmt_f64(distance_one(&a, &b, *method, &params)?)),
        methods => {
            let mut all = BTreeMap::new();
            for &method in methods {
                all.insert(method.name(), distance_one(&a, &b, method, &params)?);
            }
            match args.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&all).expect("map serializes");
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("method,distance\n");
                    for (name, d) in &all {
                        s.push_str(&format!("{name},{}\n", fmt_f64(*d)));
                    }
                    s
                }
            }
        }
    };
    emit(&text, args.out.as_deref())
}

fn require<T: Copy>(value: Option<T>, flag: &str, model: Model) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Domain(format!("{flag} is required for model '{model}' (or pass --sample)")))
}

fn params_from_flags(model: Model, args: &GenerateArgs) -> Result<ModelParams, CliError> {
    Ok(match model {
        Model::Ba => ModelParams::Ba { k: require(args.k, "--k", model)? },
        Model::Cm => ModelParams::Cm {
            k: require(args.k, "--k", model)?,
            beta: require(args.beta_cm, "--beta-cm", model)?,
        },
        Model::Er => ModelParams::Er { density: require(args.density, "--density", model)? },
        Model::Ff => ModelParams::Ff { p: require(args.p, "--p", model)?, pb: args.pb },
        Model::Kg => {
            let v = &args.initiator;
            if v.len() != 4 {
                return Err(CliError::Domain(
                    "--initiator P11,P12,P21,P22 is required for model 'kg' (or pass --sample)".into(),
                ));
            }
            ModelParams::Kg {
                initiator: [[v[0], v[1]], [v[2], v[3]]],
                k_power: require(args.k_power, "--k-power", model)?,
            }
        }
        Model::Rp => ModelParams::Rp { gamma_exp: require(args.gamma_exp, "--gamma-exp", model)? },
        Model::Ws => ModelParams::Ws { k: require(args.k, "--k", model)?, rewire: args.rewire },
        Model::Rg => ModelParams::Rg { k: require(args.k, "--k", model)? },
    })
}

fn n_range_from(args_range: &[usize]) -> Result<(usize, usize), CliError> {
    match args_range {
        [] => Ok(DEFAULT_N_RANGE),
        &[lo, hi] if lo <= hi && lo >= 12 => Ok((lo, hi)),
        other => Err(CliError::Domain(format!("--n-range needs LO,HI with 12 <= LO <= HI, got {other:?}"))),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    if args.dataset {
        let out = args
            .out
            .as_deref()
            .ok_or_else(|| CliError::Domain("--out DIR is required with --dataset".into()))?;
        let models: Vec<Model> = if args.models.is_empty() { Model::ALL.to_vec() } else { args.models.clone() };
        let range = n_range_from(&args.n_range)?;
        let items = generate_dataset_with(&models, args.per_model, range, args.seed);
        let manifest = dataset::write_corpus(out, &items)?;
        println!("{}", manifest.display());
        return Ok(());
    }
    let model = args
        .model
        .ok_or_else(|| CliError::Domain("--model is required unless --dataset is given".into()))?;
    let spec = if args.sample {
        let mut spec = sample_spec(model, n_range_from(&args.n_range)?, args.seed);
        if let Some(n) = args.n {
            if model != Model::Kg {
                spec.n_nodes = n;
            }
        }
        spec
    } else {
        let params = params_from_flags(model, &args)?;
        let n_nodes = match params {
            ModelParams::Kg { k_power, .. } => 1usize << k_power,
            _ => require(args.n, "--n", model)?,
        };
        ModelSpec { model, params, n_nodes, seed: args.seed }
    };
    let graph = spec.generate()?;
    emit(&graph.to_edge_list_string(), args.out.as_deref())
}

fn default_sweep_alphas() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
}

fn default_sweep_gammas() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 10.0).collect()
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let params = QuantizationParams { alpha: args.alpha, beta: args.beta, gamma: args.gamma };
    let items = dataset::load_corpus(&args.manifest)?;
    let mut report = EvaluationReport::new(args.experiment.name(), &params, args.seed);
    match args.experiment {
        Experiment::Knn => {
            for method in args.method.methods() {
                let matrix = pairwise_distances(&items, method, &params)?;
                let accuracy = match args.subset_size {
                    Some(size) => {
                        subset_knn_experiment(&matrix, size, args.iterations, args.k, args.seed)?
                    }
                    None => knn_accuracy(&matrix, args.k)?,
                };
                report
                    .methods
                    .entry(method.name().to_string())
                    .or_default()
                    .knn_accuracy
                    .insert(args.k, accuracy);
            }
        }
        Experiment::Interintra => {
            for method in args.method.methods() {
                let matrix = pairwise_distances(&items, method, &params)?;
                let (intra, inter) = intra_inter(&normalize_zscores(&matrix)?)?;
                let entry = report.methods.entry(method.name().to_string()).or_default();
                entry.intra = Some(intra);
                entry.inter = Some(inter);
            }
        }
        Experiment::Temporal => {
            let method = args.method.single("the temporal experiment")?;
            report.method = Some(method.name().to_string());
            let entries = dataset::parse_manifest(
                &fs::read_to_string(&args.manifest).map_err(|e| read_error(&args.manifest, e))?,
            )?;
            let order = dataset::temporal_order(&entries);
            let matrix = pairwise_distances(&items, method, &params)?;
            let series = temporal_neighbor_distance(&normalize_zscores(&matrix)?, &order)?;
            report.temporal = Some(
                series
                    .into_iter()
                    .map(|(id, v)| TemporalPoint { id, mean_neighbor_distance: v })
                    .collect(),
            );
        }
        Experiment::Sweep => {
            let alphas = if args.alphas.is_empty() { default_sweep_alphas() } else { args.alphas.clone() };
            let gammas = if args.gammas.is_empty() { default_sweep_gammas() } else { args.gammas.clone() };
            report.sweep = Some(parameter_sweep(&items, &alphas, &gammas, args.beta)?);
        }
        Experiment::Stability => {
            if args.sizes.is_empty() {
                return Err(CliError::Domain(
                    "--sizes LIST is required for the stability experiment".into(),
                ));
            }
            let method = args.method.single("the stability experiment")?;
            report.method = Some(method.name().to_string());
            let matrix = pairwise_distances(&items, method, &params)?;
            let mut points = Vec::with_capacity(args.sizes.len());
            for &size in &args.sizes {
                let (intra, inter) = subset_intra_inter(&matrix, size, args.iterations, args.seed)?;
                points.push(StabilityPoint { size, intra, inter });
            }
            report.stability = Some(points);
        }
    }
    match &args.out {
        Some(base) => {
            let json_path = PathBuf::from(format!("{}.json", base.display()));
            let csv_path = PathBuf::from(format!("{}.csv", base.display()));
            fs::write(&json_path, report.to_json_string()).map_err(|e| read_error(&json_path, e))?;
            fs::write(&csv_path, report.to_tidy_csv()).map_err(|e| read_error(&csv_path, e))?;
            Ok(())
        }
        None => {
            let text = match args.format {
                Format::Json => report.to_json_string(),
                Format::Csv => report.to_tidy_csv(),
            };
            print!("{text}");
            Ok(())
        }
    }
}
