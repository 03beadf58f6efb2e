//! Undirected simple graphs: construction, named families, and serialization.
//!
//! Vertices are labeled 1..n externally (all public interfaces, files, and
//! reports) and 0-based internally. The JSON interchange format is
//! `{"n": int, "edges": [[i, j], ...], "name": string?}` with 1-based
//! endpoints.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, IntMatrix, SymMatrix};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph JSON: {0}")]
    Json(String),
    #[error("unknown builtin graph '{0}'")]
    UnknownBuiltin(String),
    #[error("invalid parameter for builtin graph: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// Simple undirected graph on vertices 1..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Edges as 1-based pairs (i, j) with i < j, sorted.
    edges: Vec<(usize, usize)>,
    name: Option<String>,
}

/// Validates vertex range, loops, and duplicates, then builds the graph.
pub fn graph_from_edges(
    n: usize,
    edges: &[(usize, usize)],
    name: Option<String>,
) -> Result<Graph, GraphError> {
    let mut seen = BTreeSet::new();
    for &(a, b) in edges {
        for v in [a, b] {
            if v < 1 || v > n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let e = (a.min(b), a.max(b));
        if !seen.insert(e) {
            return Err(GraphError::DuplicateEdge(e.0, e.1));
        }
    }
    Ok(Graph { n, edges: seen.into_iter().collect(), name })
}

impl Graph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = Some(name.into());
        self
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a - 1] += 1;
            d[b - 1] += 1;
        }
        d
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.binary_search(&e).is_ok()
    }

    /// Exact integer adjacency matrix.
    pub fn adjacency_int(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n, self.n);
        for &(a, b) in &self.edges {
            m.set(a - 1, b - 1, 1);
            m.set(b - 1, a - 1, 1);
        }
        m
    }

    /// Floating adjacency matrix in packed symmetric form.
    pub fn adjacency(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.n);
        for &(a, b) in &self.edges {
            m.set(a - 1, b - 1, 1.0);
        }
        m
    }

    /// Whether the adjacency matrix has nonzero determinant (decided exactly).
    pub fn is_invertible(&self) -> Result<bool, GraphError> {
        Ok(linalg::is_invertible(&self.adjacency_int())?)
    }
}

// ---------------------------------------------------------------------------
// named graph families
// ---------------------------------------------------------------------------

/// Path graph 1−2−⋯−n.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("P(n) needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    Ok(graph_from_edges(n, &edges, Some(format!("P({n})")))?)
}

/// Cycle graph on n ≥ 3 vertices.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter("C(n) needs n >= 3".into()));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    edges.push((1, n));
    Ok(graph_from_edges(n, &edges, Some(format!("C({n})")))?)
}

/// Single edge on two vertices.
pub fn k2() -> Graph {
    graph_from_edges(2, &[(1, 2)], Some("K2".into())).unwrap()
}

/// Fulvene skeleton: the 5-ring 1−2−3−4−5−1 with a pendant vertex 6 on
/// vertex 4.
///
/// This labeling is load-bearing: the sets of vertices over which the graph
/// admits zero-product bridging (the principal-submatrix test on the exact
/// inverse) are quoted elsewhere in this fixed numbering, and the fixture
/// test locks them in.
pub fn fulvene() -> Graph {
    graph_from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (4, 6)], Some("F0".into()))
        .unwrap()
}

/// Comb graph: path 1−⋯−k with a pendant k+i attached to each path vertex i.
pub fn comb(k: usize) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidParameter("COMB(k) needs k >= 1".into()));
    }
    let mut edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
    edges.extend((1..=k).map(|i| (i, k + i)));
    Ok(graph_from_edges(2 * k, &edges, Some(format!("COMB({k})")))?)
}

/// Resolves a builtin family name such as `P(6)`, `C(5)`, `K2`, `F0`,
/// `COMB(4)`, or `F1`.
pub fn builtin(spec: &str) -> Result<Graph, GraphError> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("K2") {
        return Ok(k2());
    }
    if spec.eq_ignore_ascii_case("F0") {
        return Ok(fulvene());
    }
    if spec.eq_ignore_ascii_case("F1") {
        return Ok(crate::bridging::fulvene_pair());
    }
    let parse_param = |inner: &str| -> Result<usize, GraphError> {
        inner
            .parse::<usize>()
            .map_err(|_| GraphError::InvalidParameter(format!("'{inner}' is not a positive integer")))
    };
    if let Some(rest) = spec.strip_prefix("P(").or_else(|| spec.strip_prefix("p(")) {
        if let Some(inner) = rest.strip_suffix(')') {
            return path(parse_param(inner)?);
        }
    }
    if let Some(rest) = spec.strip_prefix("C(").or_else(|| spec.strip_prefix("c(")) {
        if let Some(inner) = rest.strip_suffix(')') {
            return cycle(parse_param(inner)?);
        }
    }
    let upper = spec.to_ascii_uppercase();
    if let Some(rest) = upper.strip_prefix("COMB(") {
        if let Some(inner) = rest.strip_suffix(')') {
            return comb(parse_param(inner)?);
        }
    }
    Err(GraphError::UnknownBuiltin(spec.to_string()))
}

// ---------------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

/// Parses the JSON interchange format, reporting position information for
/// malformed documents and the usual structural errors afterwards.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let file: GraphFile = serde_json::from_str(text)
        .map_err(|e| GraphError::Json(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    let edges: Vec<(usize, usize)> = file.edges.iter().map(|&[a, b]| (a, b)).collect();
    graph_from_edges(file.n, &edges, file.name)
}

/// Serializes a graph to the JSON interchange format.
pub fn serialize_graph(g: &Graph) -> String {
    let file = GraphFile {
        n: g.n,
        edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        name: g.name.clone(),
    };
    serde_json::to_string(&file).expect("graph serialization cannot fail")
}

// ---------------------------------------------------------------------------
// bipartite bridge patterns
// ---------------------------------------------------------------------------

/// A 0/1 bridging pattern between an n-vertex graph and an m-vertex graph.
///
/// Column `j` of `k` corresponds to vertex `j+1` of the second graph; the
/// pattern may only touch the designated admissible columns, so the support
/// invariant holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteBridge {
    k: IntMatrix,
    /// Admissible second-graph vertices (1-based, in caller-specified order).
    columns: Vec<usize>,
}

impl BipartiteBridge {
    /// Validates entries (0/1) and column support, then wraps the pattern.
    pub fn new(k: IntMatrix, columns: Vec<usize>) -> Result<Self, GraphError> {
        for &c in &columns {
            if c < 1 || c > k.cols() {
                return Err(GraphError::VertexOutOfRange { v: c, n: k.cols() });
            }
        }
        for i in 0..k.rows() {
            for j in 0..k.cols() {
                let v = k.get(i, j);
                if v != 0 && v != 1 {
                    return Err(GraphError::InvalidParameter(format!(
                        "bridge entry ({},{}) is {v}, expected 0 or 1",
                        i + 1,
                        j + 1
                    )));
                }
                if v == 1 && !columns.contains(&(j + 1)) {
                    return Err(GraphError::InvalidParameter(format!(
                        "bridge edge touches vertex {} outside the admissible columns",
                        j + 1
                    )));
                }
            }
        }
        Ok(BipartiteBridge { k, columns })
    }

    /// A pattern with every column admissible (no support restriction).
    pub fn dense(k: IntMatrix) -> Result<Self, GraphError> {
        let cols = (1..=k.cols()).collect();
        BipartiteBridge::new(k, cols)
    }

    /// Builds a pattern from `(first-graph vertex, second-graph vertex)`
    /// pairs, both 1-based.
    pub fn from_pairs(
        n: usize,
        m: usize,
        columns: Vec<usize>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut k = IntMatrix::zeros(n, m);
        for &(i, j) in pairs {
            if i < 1 || i > n {
                return Err(GraphError::VertexOutOfRange { v: i, n });
            }
            if j < 1 || j > m {
                return Err(GraphError::VertexOutOfRange { v: j, n: m });
            }
            k.set(i - 1, j - 1, 1);
        }
        BipartiteBridge::new(k, columns)
    }

    pub fn k(&self) -> &IntMatrix {
        &self.k
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn k_b(&self) -> usize {
        self.columns.len()
    }

    pub fn edge_count(&self) -> usize {
        self.k.sum() as usize
    }

    /// Bridge edges as `(first-graph vertex, second-graph vertex)`, 1-based.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k.rows() {
            for j in 0..self.k.cols() {
                if self.k.get(i, j) == 1 {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    /// Human-readable pattern in the form `j↦i₁,i₂; j'↦∅`, one group per
    /// admissible column in their declared order.
    pub fn notation(&self) -> String {
        let mut out = String::new();
        for (idx, &c) in self.columns.iter().enumerate() {
            if idx > 0 {
                out.push_str("; ");
            }
            let _ = write!(out, "{c}\u{21A6}");
            let attached: Vec<String> = (0..self.k.rows())
                .filter(|&i| self.k.get(i, c - 1) == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            if attached.is_empty() {
                out.push('\u{2205}');
            } else {
                out.push_str(&attached.join(","));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

/// Renders the graph in Graphviz DOT form; edges listed in `dashed` (1-based
/// pairs) are drawn `style=dashed` so bridge edges stand out.
pub fn dot_export(g: &Graph, dashed: &[(usize, usize)]) -> String {
    let name: String = g
        .name
        .as_deref()
        .unwrap_or("g")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let mut out = format!("graph {name} {{\n");
    for v in 1..=g.n {
        let _ = writeln!(out, "  {v};");
    }
    let is_dashed =
        |a: usize, b: usize| dashed.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
    for &(a, b) in &g.edges {
        if is_dashed(a, b) {
            let _ = writeln!(out, "  {a} -- {b} [style=dashed];");
        } else {
            let _ = writeln!(out, "  {a} -- {b};");
        }
    }
    out.push_str("}\n");
    out
}
