//! Simple undirected graphs and edge-list text I/O.
//!
//! The only input format is a whitespace-delimited edge list: two integer
//! node ids per line, lines starting with `#` or `%` are comments. Input is
//! always read as undirected: duplicate lines and reversed duplicates
//! collapse to one edge, self-loops are dropped.

use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("edge ({0}, {1}) references a node id >= node count {2}")]
    EndpointOutOfRange(u32, u32, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A simple undirected graph: a node count plus a normalized edge set.
///
/// Edges are stored with the smaller endpoint first, sorted and deduplicated;
/// self-loops are never stored. Node ids are dense `0..node_count`, but ids
/// without incident edges are legal (isolated nodes keep degree 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds a graph from raw endpoint pairs, normalizing as on load:
    /// orientation discarded, self-loops dropped, duplicates collapsed.
    ///
    /// Endpoints must be `< node_count`.
    pub fn new(node_count: usize, raw_edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        let mut edges: Vec<(u32, u32)> = raw_edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        if let Some(&(u, v)) = edges.last() {
            if v as usize >= node_count {
                return Err(GraphError::EndpointOutOfRange(u, v, node_count));
            }
        }
        Ok(Graph { node_count, edges })
    }

    /// Like [`Graph::new`] with the node count inferred as `1 + max id`.
    pub fn from_edges(raw_edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let raw: Vec<(u32, u32)> = raw_edges.into_iter().collect();
        let node_count = raw
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0);
        Graph::new(node_count, raw).expect("node count inferred from edges")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edges, sorted, smaller endpoint first.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Per-node degrees, indexed by node id; sums to `2 * edge_count`.
    pub fn degree_sequence(&self) -> Vec<u32> {
        let mut degrees = vec![0u32; self.node_count];
        for &(u, v) in &self.edges {
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        degrees
    }

    /// Writes the graph as an edge list. A `# nodes: N` comment header
    /// preserves trailing isolated nodes across a round-trip; readers that
    /// ignore comments still get the same edge set.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# nodes: {}", self.node_count)?;
        for &(u, v) in &self.edges {
            writeln!(w, "{} {}", u, v)?;
        }
        Ok(())
    }

    /// The edge-list serialization as a string (see [`Graph::write_edge_list`]).
    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Remap the ids that actually occur onto `0..k` (order-preserving) and
    /// drop phantom isolates implied by gaps in the input numbering.
    pub compact_ids: bool,
}

/// Parses an edge list (see module docs for the format).
///
/// Node count is `1 + max id` (0 for empty input), or the `# nodes: N`
/// header when present and larger.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    load_edge_list_with(reader, LoadOptions::default())
}

/// [`load_edge_list`] over a file path.
pub fn load_edge_list_path(path: &std::path::Path) -> Result<Graph, GraphError> {
    let file = std::fs::File::open(path)?;
    load_edge_list(std::io::BufReader::new(file))
}

pub fn load_edge_list_with<R: BufRead>(reader: R, options: LoadOptions) -> Result<Graph, GraphError> {
    let mut raw: Vec<(u32, u32)> = Vec::new();
    let mut node_count_hint: usize = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text.starts_with('#') || text.starts_with('%') {
            if let Some(rest) = text.strip_prefix("# nodes:") {
                if let Ok(n) = rest.trim().parse::<usize>() {
                    node_count_hint = node_count_hint.max(n);
                }
            }
            continue;
        }
        let mut tokens = text.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    reason: "expected two integer tokens".into(),
                })
            }
        };
        let parse_id = |tok: &str| -> Result<u32, GraphError> {
            tok.parse::<u32>().map_err(|_| GraphError::Parse {
                line: idx + 1,
                reason: format!("invalid node id {:?}", tok),
            })
        };
        raw.push((parse_id(a)?, parse_id(b)?));
    }

    if options.compact_ids {
        let mut used: Vec<u32> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
        used.sort_unstable();
        used.dedup();
        let remap = |id: u32| used.binary_search(&id).expect("id came from the used set") as u32;
        let compacted: Vec<(u32, u32)> = raw.iter().map(|&(u, v)| (remap(u), remap(v))).collect();
        return Graph::new(used.len(), compacted);
    }

    let max_id = raw.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0);
    Graph::new(node_count_hint.max(max_id), raw)
}
