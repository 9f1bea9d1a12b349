//! Corpus persistence: one edge-list file per graph plus a manifest CSV
//! (`path,label,model,n,seed,params_json` with an optional `timestamp`
//! column) that records labels and enough provenance to regenerate
//! synthetic instances.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::generators::{LabeledGraph, Model, ModelParams, ModelSpec};
use crate::graph::{load_edge_list_path, GraphError};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest: {0}")]
    Csv(#[from] csv::Error),
    #[error("manifest is missing required column '{0}'")]
    MissingColumn(&'static str),
    #[error("manifest row {row}: {reason}")]
    BadRow { row: usize, reason: String },
    #[error("{path}: {source}")]
    Graph {
        path: PathBuf,
        #[source]
        source: GraphError,
    },
}

/// One manifest row. `path` is relative to the manifest file and doubles as
/// the instance id; `model`, `n`, `seed`, and `params_json` are populated
/// for generated corpora and absent for user-supplied graphs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ManifestEntry {
    pub path: String,
    pub label: String,
    pub model: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub params_json: Option<String>,
    pub timestamp: Option<f64>,
}

/// Serializes manifest rows. The `timestamp` column appears only when some
/// row carries one, so generated corpora stay at the six-column schema.
pub fn manifest_to_string(entries: &[ManifestEntry]) -> String {
    let with_ts = entries.iter().any(|e| e.timestamp.is_some());
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["path", "label", "model", "n", "seed", "params_json"];
    if with_ts {
        header.push("timestamp");
    }
    wtr.write_record(&header).expect("in-memory write");
    for e in entries {
        let mut record = vec![
            e.path.clone(),
            e.label.clone(),
            e.model.clone().unwrap_or_default(),
            e.n.map(|v| v.to_string()).unwrap_or_default(),
            e.seed.map(|v| v.to_string()).unwrap_or_default(),
            e.params_json.clone().unwrap_or_default(),
        ];
        if with_ts {
            record.push(e.timestamp.map(|v| format!("{v}")).unwrap_or_default());
        }
        wtr.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Parses a manifest. Columns are located by header name; `path` and
/// `label` are required, everything else is optional and may be empty.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &'static str| headers.iter().position(|h| h == name);
    let path_col = col("path").ok_or(DatasetError::MissingColumn("path"))?;
    let label_col = col("label").ok_or(DatasetError::MissingColumn("label"))?;
    let model_col = col("model");
    let n_col = col("n");
    let seed_col = col("seed");
    let params_col = col("params_json");
    let ts_col = col("timestamp");
    let mut entries = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 2; // 1-based, after the header line
        let field = |c: Option<usize>| -> Option<String> {
            c.and_then(|c| record.get(c)).filter(|s| !s.is_empty()).map(str::to_string)
        };
        let path = record
            .get(path_col)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| DatasetError::BadRow { row, reason: "empty path".into() })?
            .to_string();
        let label = record
            .get(label_col)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| DatasetError::BadRow { row, reason: "empty label".into() })?
            .to_string();
        let parse_num = |name: &str, s: Option<String>| -> Result<Option<f64>, DatasetError> {
            s.map(|s| {
                s.parse::<f64>().map_err(|_| DatasetError::BadRow {
                    row,
                    reason: format!("cannot parse {name} value '{s}'"),
                })
            })
            .transpose()
        };
        let n = field(n_col)
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| DatasetError::BadRow { row, reason: format!("cannot parse n value '{s}'") })
            })
            .transpose()?;
        let seed = field(seed_col)
            .map(|s| {
                s.parse::<u64>().map_err(|_| DatasetError::BadRow {
                    row,
                    reason: format!("cannot parse seed value '{s}'"),
                })
            })
            .transpose()?;
        entries.push(ManifestEntry {
            path,
            label,
            model: field(model_col),
            n,
            seed,
            params_json: field(params_col),
            timestamp: parse_num("timestamp", field(ts_col))?,
        });
    }
    Ok(entries)
}

fn read_to_string(path: &Path) -> Result<String, DatasetError> {
    fs::read_to_string(path).map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })
}

/// Loads every graph referenced by a manifest. Paths resolve relative to
/// the manifest's directory; each instance id is the manifest's path string.
pub fn load_corpus(manifest_path: &Path) -> Result<Vec<LabeledGraph>, DatasetError> {
    let entries = parse_manifest(&read_to_string(manifest_path)?)?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let file = base.join(&e.path);
            let graph = load_edge_list_path(&file)
                .map_err(|source| DatasetError::Graph { path: file.clone(), source })?;
            let spec = rebuild_spec(e, i + 2)?;
            Ok(LabeledGraph { graph, label: e.label.clone(), instance_id: e.path.clone(), spec })
        })
        .collect()
}

/// Reconstructs the generation spec when a row carries full provenance.
fn rebuild_spec(e: &ManifestEntry, row: usize) -> Result<Option<ModelSpec>, DatasetError> {
    let (Some(model), Some(n), Some(seed), Some(params_json)) =
        (e.model.as_deref(), e.n, e.seed, e.params_json.as_deref())
    else {
        return Ok(None);
    };
    let model: Model = model
        .parse()
        .map_err(|reason: String| DatasetError::BadRow { row, reason })?;
    let params = ModelParams::from_json(model, params_json).map_err(|err| DatasetError::BadRow {
        row,
        reason: format!("bad params_json: {err}"),
    })?;
    Ok(Some(ModelSpec { model, params, n_nodes: n, seed }))
}

/// Writes one edge-list file per item plus `manifest.csv` into `dir`
/// (created if needed). Returns the manifest path.
pub fn write_corpus(dir: &Path, items: &[LabeledGraph]) -> Result<PathBuf, DatasetError> {
    fs::create_dir_all(dir).map_err(|source| DatasetError::Io { path: dir.to_path_buf(), source })?;
    let mut entries = Vec::with_capacity(items.len());
    for item in items {
        let file_name = format!("{}.edges", item.instance_id);
        let file_path = dir.join(&file_name);
        fs::write(&file_path, item.graph.to_edge_list_string())
            .map_err(|source| DatasetError::Io { path: file_path.clone(), source })?;
        let (model, n, seed, params_json) = match &item.spec {
            Some(spec) => (
                Some(spec.model.name().to_string()),
                Some(spec.n_nodes),
                Some(spec.seed),
                Some(serde_json::to_string(&spec.params).expect("params serialize")),
            ),
            None => (None, Some(item.graph.node_count()), None, None),
        };
        entries.push(ManifestEntry {
            path: file_name,
            label: item.label.clone(),
            model,
            n,
            seed,
            params_json,
            timestamp: None,
        });
    }
    let manifest_path = dir.join("manifest.csv");
    fs::write(&manifest_path, manifest_to_string(&entries))
        .map_err(|source| DatasetError::Io { path: manifest_path.clone(), source })?;
    Ok(manifest_path)
}

/// Snapshot ids (manifest paths) of all timestamped rows, in temporal
/// order; ties order by path.
pub fn temporal_order(entries: &[ManifestEntry]) -> Vec<String> {
    let mut stamped: Vec<(&f64, &String)> = entries
        .iter()
        .filter_map(|e| e.timestamp.as_ref().map(|t| (t, &e.path)))
        .collect();
    stamped.sort_by(|a, b| a.0.total_cmp(b.0).then_with(|| a.1.cmp(b.1)));
    stamped.into_iter().map(|(_, p)| p.clone()).collect()
}
