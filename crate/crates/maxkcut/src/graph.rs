//! Weighted undirected graphs, seeded instance generators, file I/O, and the
//! exhaustive MAX k-CUT oracle.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default cap on the number of assignments the exhaustive solver will
/// enumerate (`k^|V|`).
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 100_000_000;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({u}, {v}) is invalid: {reason}")]
    InvalidEdge { u: usize, v: usize, reason: String },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("assignment has {got} colors but the graph has {want} vertices")]
    InvalidAssignment { got: usize, want: usize },
    #[error("assignment color {color} is out of range for k = {k}")]
    ColorOutOfRange { color: u32, k: u32 },
    #[error("{what} would enumerate {size:e} assignments, above the cap {cap:e}")]
    SizeLimit { what: String, size: f64, cap: f64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A weighted undirected simple graph. Vertices are `0..num_vertices`;
/// edges are stored normalized (`u < v`) and sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Builds a graph, validating and normalizing the edge list: endpoints in
    /// range and distinct, weights finite and strictly positive, no duplicate
    /// undirected edges. Edges are stored with `u < v`, sorted ascending.
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, GraphError> {
        if num_vertices == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u == v {
                return Err(GraphError::InvalidEdge { u, v, reason: "self-loop".into() });
            }
            if u >= num_vertices || v >= num_vertices {
                return Err(GraphError::InvalidEdge {
                    u,
                    v,
                    reason: format!("vertex id out of range (num_vertices = {num_vertices})"),
                });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(GraphError::InvalidEdge {
                    u,
                    v,
                    reason: format!("weight {w} is not a finite positive number"),
                });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
            normalized.push((a, b, w));
        }
        normalized.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        Ok(Self { num_vertices, edges: normalized })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v, w)` with `u < v`, sorted ascending.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// A color per vertex, each in `0..k` for the `k` of the enclosing problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(pub Vec<u32>);

impl Assignment {
    pub fn colors(&self) -> &[u32] {
        &self.0
    }
}

/// Total weight of edges whose endpoints received different colors.
pub fn cost(g: &Graph, a: &Assignment) -> Result<f64, GraphError> {
    if a.0.len() != g.num_vertices {
        return Err(GraphError::InvalidAssignment { got: a.0.len(), want: g.num_vertices });
    }
    Ok(cost_unchecked(g, &a.0))
}

/// `cost` without the length check; the caller guarantees `colors.len() == |V|`.
/// Summation is in edge order so repeated evaluations are bit-identical.
pub(crate) fn cost_unchecked(g: &Graph, colors: &[u32]) -> f64 {
    let mut total = 0.0;
    for &(u, v, w) in &g.edges {
        if colors[u] != colors[v] {
            total += w;
        }
    }
    total
}

/// Result of exhaustive enumeration: the optimum and every maximizing
/// assignment that was visited (vertex 0 pinned to color 0, see
/// [`brute_force_max_kcut`]).
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub optimum: f64,
    pub witnesses: Vec<Assignment>,
}

/// Exhaustive weighted MAX k-CUT.
///
/// Enumerates base-k counters over the vertices with vertex 0 pinned to
/// color 0; by label-permutation symmetry this does not change the optimum
/// and saves a factor of k. Errors if `k^|V|` exceeds `cap`
/// ([`DEFAULT_BRUTE_FORCE_CAP`] by default).
pub fn brute_force_max_kcut(g: &Graph, k: u32) -> Result<BruteForceResult, GraphError> {
    brute_force_max_kcut_capped(g, k, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_max_kcut_capped(
    g: &Graph,
    k: u32,
    cap: u64,
) -> Result<BruteForceResult, GraphError> {
    if k < 2 {
        return Err(GraphError::InvalidArgument(format!("k must be >= 2, got {k}")));
    }
    let n = g.num_vertices;
    let total = (k as f64).powi(n as i32);
    if total > cap as f64 {
        return Err(GraphError::SizeLimit {
            what: format!("brute force with k = {k}, |V| = {n}"),
            size: total,
            cap: cap as f64,
        });
    }
    // Vertex 0 is fixed to color 0; the counter runs over vertices 1..n.
    let free = n - 1;
    let count: u64 = (k as u64).pow(free as u32);

    let scan = |range: std::ops::Range<u64>| -> (f64, Vec<Assignment>) {
        let mut colors = vec![0u32; n];
        let mut best = f64::NEG_INFINITY;
        let mut witnesses = Vec::new();
        for idx in range {
            let mut rem = idx;
            for v in 1..n {
                colors[v] = (rem % k as u64) as u32;
                rem /= k as u64;
            }
            let c = cost_unchecked(g, &colors);
            if c > best {
                best = c;
                witnesses.clear();
                witnesses.push(Assignment(colors.clone()));
            } else if c == best {
                witnesses.push(Assignment(colors.clone()));
            }
        }
        (best, witnesses)
    };

    #[cfg(feature = "parallel")]
    let (optimum, witnesses) = {
        const MIN_PARALLEL: u64 = 1 << 14;
        if count >= MIN_PARALLEL {
            let chunks = (rayon::current_num_threads() * 4).max(1) as u64;
            let step = count.div_ceil(chunks);
            let partials: Vec<(f64, Vec<Assignment>)> = (0..chunks)
                .into_par_iter()
                .map(|c| scan(c * step..((c + 1) * step).min(count)))
                .collect();
            merge_partials(partials)
        } else {
            scan(0..count)
        }
    };
    #[cfg(not(feature = "parallel"))]
    let (optimum, witnesses) = scan(0..count);

    Ok(BruteForceResult { optimum, witnesses })
}

fn merge_partials(partials: Vec<(f64, Vec<Assignment>)>) -> (f64, Vec<Assignment>) {
    let mut best = f64::NEG_INFINITY;
    let mut witnesses = Vec::new();
    for (b, ws) in partials {
        if b > best {
            best = b;
            witnesses = ws;
        } else if b == best {
            witnesses.extend(ws);
        }
    }
    (best, witnesses)
}

// ============================================================================
// Seeded generators
// ============================================================================
//
// All randomness comes from ChaCha8 seeded with a caller-provided 64-bit
// seed, so instances are reproducible across platforms and runs.

/// Erdős–Rényi G(n, p): each unordered pair `(i, j)`, visited in
/// lexicographic order, is included independently with probability `p`;
/// all weights are 1.
pub fn generate_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidArgument(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::new(n, edges)
}

/// Barabási–Albert preferential attachment with `m` edges per new vertex and
/// uniform weights on `[weight_low, weight_high]`.
///
/// Construction: vertices `0..m` start as a star with hub 0 (`m - 1` edges),
/// then each vertex `v` in `m..n` attaches to `m` distinct existing vertices
/// drawn with probability proportional to degree (uniformly while no edge
/// exists yet). The edge count is therefore exactly `(m - 1) + m * (n - m)`.
pub fn generate_barabasi_albert(
    n: usize,
    m: usize,
    seed: u64,
    weight_low: f64,
    weight_high: f64,
) -> Result<Graph, GraphError> {
    if m < 1 || m >= n {
        return Err(GraphError::InvalidArgument(format!(
            "need 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    if !(weight_low.is_finite() && weight_high.is_finite() && weight_low > 0.0) {
        return Err(GraphError::InvalidArgument(
            "weights must be finite with weight_low > 0".into(),
        ));
    }
    if weight_high < weight_low {
        return Err(GraphError::InvalidArgument(format!(
            "weight_high {weight_high} < weight_low {weight_low}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(weight_low..=weight_high);

    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    // One entry per edge endpoint; sampling from it is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::new();
    for i in 1..m {
        let w = weight(&mut rng);
        edges.push((0, i, w));
        endpoints.push(0);
        endpoints.push(i);
    }
    for v in m..n {
        let mut targets: HashSet<usize> = HashSet::new();
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            targets.insert(t);
        }
        let mut sorted: Vec<usize> = targets.into_iter().collect();
        sorted.sort_unstable();
        for t in sorted {
            let w = weight(&mut rng);
            edges.push((t, v, w));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Graph::new(n, edges)
}

// ============================================================================
// File formats
// ============================================================================

#[derive(Serialize, Deserialize)]
struct GraphFile {
    num_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphFile { num_vertices: self.num_vertices, edges: self.edges.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphFile::deserialize(d)?;
        Graph::new(raw.num_vertices, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Writes the graph as JSON: `{"num_vertices": N, "edges": [[u, v, w], ...]}`.
pub fn save_graph(g: &Graph, path: &Path) -> Result<(), GraphError> {
    let json = serde_json::to_string_pretty(g).expect("graph serialization cannot fail");
    std::fs::write(path, json + "\n")?;
    Ok(())
}

/// Loads a graph from JSON (see [`save_graph`]) or, when the file does not
/// start with `{`, from whitespace-separated edge-list text with one
/// `u v w` (or `u v`, weight 1) per line; `num_vertices` is the largest
/// vertex id plus one. Lines starting with `#` are ignored.
pub fn load_graph(path: &Path) -> Result<Graph, GraphError> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| GraphError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    } else {
        parse_edge_list(&text)
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut max_vertex = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(GraphError::Parse {
                line: i + 1,
                msg: format!("expected 'u v' or 'u v w', got {} fields", fields.len()),
            });
        }
        let parse_id = |s: &str| {
            s.parse::<usize>().map_err(|e| GraphError::Parse {
                line: i + 1,
                msg: format!("bad vertex id {s:?}: {e}"),
            })
        };
        let u = parse_id(fields[0])?;
        let v = parse_id(fields[1])?;
        let w = if fields.len() == 3 {
            fields[2].parse::<f64>().map_err(|e| GraphError::Parse {
                line: i + 1,
                msg: format!("bad weight {:?}: {e}", fields[2]),
            })?
        } else {
            1.0
        };
        max_vertex = max_vertex.max(u).max(v);
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(GraphError::Parse { line: 0, msg: "no edges in edge-list file".into() });
    }
    Graph::new(max_vertex + 1, edges)
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "graph: |V| = {}, |E| = {}, total weight = {}",
            self.num_vertices,
            self.edges.len(),
            self.total_weight()
        )
    }
}
