//! Bridged graphs: construction, bridgeability, and problem definitions.
//!
//! Two graphs are *bridged* by joining them with a bipartite 0/1 pattern K:
//! the combined adjacency matrix is `[[A, K], [Kᵀ, B]]`. A vertex subset of
//! the second graph is *arbitrarily bridgeable* when the principal submatrix
//! of the exact inverse B⁻¹ on that subset is identically zero; in that case
//! `K·B⁻¹·Kᵀ = 0` for every K supported on those columns, so the Schur
//! complement of the bridged matrix collapses to A and the spectral-gap
//! machinery can treat the bridge pattern as the only unknown. The test is
//! exact (rational arithmetic) and invariant under relabeling.
//!
//! [`BridgeProblem`] packages two invertible graphs, a bridgeable subset and
//! optional side constraints; the optimizer consumes it. [`validate_bridge`]
//! checks a concrete pattern against such a problem and reports each
//! violation rather than failing fast, so callers can print a full list.

use std::fmt;

use thiserror::Error;

use crate::graph::{graph_from_edges, BipartiteBridge, Graph, GraphError};
use crate::linalg::{
    is_invertible, rational_inverse, LinalgError, RationalInverse, RationalMatrix,
};

#[derive(Debug, Error)]
pub enum BridgingError {
    #[error("{0} is singular")]
    NotInvertible(String),
    #[error("subset {subset:?} is not arbitrarily bridgeable")]
    NotBridgeable { subset: Vec<usize> },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Joins two graphs along a bipartite pattern: vertices of the second graph
/// are relabeled to `n+1..n+m`, and each 1-entry `K[i][j]` becomes an edge
/// `(i, n+j)`. Purely structural — no invertibility or bridgeability
/// requirements.
pub fn bridge(ga: &Graph, gb: &Graph, pattern: &BipartiteBridge) -> Result<Graph, BridgingError> {
    let n = ga.n();
    let m = gb.n();
    let k = pattern.k();
    if k.rows() != n || k.cols() != m {
        return Err(BridgingError::Dimension(format!(
            "pattern is {}x{}, graphs need {}x{}",
            k.rows(),
            k.cols(),
            n,
            m
        )));
    }
    let mut edges: Vec<(usize, usize)> = ga.edges().to_vec();
    edges.extend(gb.edges().iter().map(|&(i, j)| (n + i, n + j)));
    edges.extend(pattern.pairs().iter().map(|&(i, j)| (i, n + j)));
    let name = match (ga.name(), gb.name()) {
        (Some(a), Some(b)) => Some(format!("bridged({a}, {b})")),
        _ => None,
    };
    Ok(graph_from_edges(n + m, &edges, name)?)
}

fn checked_subset(subset: &[usize], m: usize) -> Result<Vec<usize>, BridgingError> {
    if subset.is_empty() {
        return Err(BridgingError::InvalidSubset("subset must be nonempty".into()));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(BridgingError::InvalidSubset(format!("repeated vertex in {subset:?}")));
    }
    if sorted[0] < 1 || *sorted.last().unwrap() > m {
        return Err(BridgingError::InvalidSubset(format!(
            "vertices in {subset:?} must lie in 1..={m}"
        )));
    }
    Ok(sorted)
}

fn exact_inverse_of(g: &Graph, which: &str) -> Result<RationalMatrix, BridgingError> {
    match rational_inverse(&g.adjacency_int())? {
        RationalInverse::Invertible(inv) => Ok(inv),
        RationalInverse::Singular => Err(BridgingError::NotInvertible(which.into())),
    }
}

/// Whether the principal submatrix of B⁻¹ on the given (1-based) vertices is
/// identically zero — the exact criterion for the subset to accept arbitrary
/// bridge patterns without disturbing the Schur complement.
pub fn is_arbitrarily_bridgeable(gb: &Graph, subset: &[usize]) -> Result<bool, BridgingError> {
    let sorted = checked_subset(subset, gb.n())?;
    let inv = exact_inverse_of(gb, "graph")?;
    let idx: Vec<usize> = sorted.iter().map(|&v| v - 1).collect();
    Ok(inv.principal_submatrix(&idx).is_zero())
}

/// All arbitrarily bridgeable subsets of the given size, in lexicographic
/// order of their sorted vertex lists. `k` must satisfy `1 ≤ k ≤ n`; sizes
/// above `n/2` yield an empty list (the criterion forces a zero principal
/// submatrix of an invertible matrix, impossible past half the order).
pub fn enumerate_bridgeable_subsets(gb: &Graph, k: usize) -> Result<Vec<Vec<usize>>, BridgingError> {
    let m = gb.n();
    if k == 0 {
        return Err(BridgingError::InvalidSubset("subset size must be at least 1".into()));
    }
    if k > m {
        return Err(BridgingError::InvalidSubset(format!(
            "subset size {k} exceeds the graph order {m}"
        )));
    }
    if 2 * k > m {
        return Ok(Vec::new());
    }
    let inv = exact_inverse_of(gb, "graph")?;

    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect(); // 0-based combination
    loop {
        if inv.principal_submatrix(&idx).is_zero() {
            out.push(idx.iter().map(|&i| i + 1).collect());
        }
        // next combination in lexicographic order
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + m - k {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return Ok(out);
            }
        }
    }
}

/// Exact check that `K·B⁻¹·Kᵀ = 0` for a concrete pattern.
pub fn kbk_zero_check(gb: &Graph, pattern: &BipartiteBridge) -> Result<bool, BridgingError> {
    let k = pattern.k();
    if k.cols() != gb.n() {
        return Err(BridgingError::Dimension(format!(
            "pattern has {} columns, graph has {} vertices",
            k.cols(),
            gb.n()
        )));
    }
    let inv = exact_inverse_of(gb, "graph")?;
    let kbk = inv.mul_int_left(k).mul_int_right(&k.transpose());
    Ok(kbk.is_zero())
}

/// The double-fulvene graph: two fulvene units bridged over the subset
/// {1, 2}, with ring vertex 1 of each unit joined to ring vertex 1 of the
/// other's bridge pair — edges 1−7 and 2−8 on top of the two copies, so
/// the four joined ring vertices form a 4-cycle. A 12-vertex invertible
/// graph with spectral gap 0.566658 (smallest positive eigenvalue √2 − 1).
pub fn fulvene_pair() -> Graph {
    let f = crate::graph::fulvene();
    let pattern = BipartiteBridge::from_pairs(6, 6, vec![1, 2], &[(1, 1), (2, 2)])
        .expect("fixture pattern is valid");
    bridge(&f, &f, &pattern).expect("fixture dimensions are valid").with_name("F1")
}

/// Side constraints for the bridge search. All bounds are inclusive and
/// count bridge edges only; the degree cap also counts the edges already
/// present in each graph.
#[derive(Debug, Clone, Default)]
pub struct ConstraintSet {
    /// Cap on the total degree (existing + bridge) of every vertex on both
    /// sides.
    pub max_degree: Option<usize>,
    /// Per-vertex bounds on bridge edges leaving each first-graph vertex;
    /// one entry per vertex, in vertex order.
    pub row_bounds: Option<Vec<(usize, usize)>>,
    /// Bounds on bridge edges arriving at each admissible second-graph
    /// vertex, aligned with the declared bridge-vertex order.
    pub col_bounds: Option<Vec<(usize, usize)>>,
}

/// A validated bridge-search instance: two exactly invertible graphs, an
/// arbitrarily bridgeable subset of the second, and side constraints.
#[derive(Debug, Clone)]
pub struct BridgeProblem {
    ga: Graph,
    gb: Graph,
    /// 1-based admissible vertices of `gb`, in their declared order.
    bridge_vertices: Vec<usize>,
    constraints: ConstraintSet,
}

impl BridgeProblem {
    pub fn new(
        ga: Graph,
        gb: Graph,
        bridge_vertices: Vec<usize>,
        constraints: ConstraintSet,
    ) -> Result<Self, BridgingError> {
        if ga.n() == 0 || gb.n() == 0 {
            return Err(BridgingError::Dimension("graphs must be nonempty".into()));
        }
        if !is_invertible(&ga.adjacency_int())? {
            return Err(BridgingError::NotInvertible("first graph".into()));
        }
        if !is_invertible(&gb.adjacency_int())? {
            return Err(BridgingError::NotInvertible("second graph".into()));
        }
        let sorted = checked_subset(&bridge_vertices, gb.n())?;
        if !is_arbitrarily_bridgeable(&gb, &sorted)? {
            return Err(BridgingError::NotBridgeable { subset: sorted });
        }
        if let Some(rb) = &constraints.row_bounds {
            if rb.len() != ga.n() {
                return Err(BridgingError::Dimension(format!(
                    "{} row bounds for {} vertices",
                    rb.len(),
                    ga.n()
                )));
            }
            if let Some((lo, hi)) = rb.iter().find(|(lo, hi)| lo > hi) {
                return Err(BridgingError::InvalidSubset(format!(
                    "row bound ({lo}, {hi}) has lower above upper"
                )));
            }
        }
        if let Some(cb) = &constraints.col_bounds {
            if cb.len() != bridge_vertices.len() {
                return Err(BridgingError::Dimension(format!(
                    "{} column bounds for {} bridge vertices",
                    cb.len(),
                    bridge_vertices.len()
                )));
            }
            if let Some((lo, hi)) = cb.iter().find(|(lo, hi)| lo > hi) {
                return Err(BridgingError::InvalidSubset(format!(
                    "column bound ({lo}, {hi}) has lower above upper"
                )));
            }
        }
        Ok(BridgeProblem { ga, gb, bridge_vertices, constraints })
    }

    pub fn ga(&self) -> &Graph {
        &self.ga
    }

    pub fn gb(&self) -> &Graph {
        &self.gb
    }

    /// Admissible vertices in their declared order (1-based).
    pub fn bridge_vertices(&self) -> &[usize] {
        &self.bridge_vertices
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    /// Number of free 0/1 entries in the pattern.
    pub fn pattern_bits(&self) -> usize {
        self.ga.n() * self.bridge_vertices.len()
    }
}

/// One constraint violation found by [`validate_bridge`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyBridge,
    WrongShape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    /// A bridge edge arrives at a second-graph vertex outside the
    /// admissible set (1-based).
    UnsupportedColumn { column: usize },
    /// Total degree (existing + bridge) exceeds the cap; `first_side` tells
    /// which graph the vertex belongs to.
    MaxDegreeExceeded { first_side: bool, vertex: usize, degree: usize, limit: usize },
    RowSumOutOfBounds { vertex: usize, sum: usize, lo: usize, hi: usize },
    ColSumOutOfBounds { column: usize, sum: usize, lo: usize, hi: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyBridge => write!(f, "bridge has no edges"),
            Violation::WrongShape { rows, cols, expected_rows, expected_cols } => write!(
                f,
                "pattern is {rows}x{cols}, expected {expected_rows}x{expected_cols}"
            ),
            Violation::UnsupportedColumn { column } => {
                write!(f, "bridge edge arrives at non-admissible vertex {column}")
            }
            Violation::MaxDegreeExceeded { first_side, vertex, degree, limit } => write!(
                f,
                "vertex {vertex} of the {} graph reaches degree {degree} > {limit}",
                if *first_side { "first" } else { "second" }
            ),
            Violation::RowSumOutOfBounds { vertex, sum, lo, hi } => write!(
                f,
                "vertex {vertex} of the first graph carries {sum} bridge edges, outside [{lo}, {hi}]"
            ),
            Violation::ColSumOutOfBounds { column, sum, lo, hi } => write!(
                f,
                "vertex {column} of the second graph receives {sum} bridge edges, outside [{lo}, {hi}]"
            ),
        }
    }
}

/// Outcome of checking a concrete pattern against a problem.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "bridge satisfies all constraints");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a concrete pattern against the problem's admissible set and side
/// constraints, collecting every violation.
pub fn validate_bridge(problem: &BridgeProblem, pattern: &BipartiteBridge) -> ValidationReport {
    let n = problem.ga.n();
    let m = problem.gb.n();
    let k = pattern.k();
    let mut report = ValidationReport::default();
    if k.rows() != n || k.cols() != m {
        report.violations.push(Violation::WrongShape {
            rows: k.rows(),
            cols: k.cols(),
            expected_rows: n,
            expected_cols: m,
        });
        return report;
    }
    if pattern.edge_count() == 0 {
        report.violations.push(Violation::EmptyBridge);
    }

    let row_sums: Vec<usize> = (0..n).map(|i| (0..m).filter(|&j| k.get(i, j) == 1).count()).collect();
    let col_sums: Vec<usize> = (0..m).map(|j| (0..n).filter(|&i| k.get(i, j) == 1).count()).collect();

    for (j, &s) in col_sums.iter().enumerate() {
        if s > 0 && !problem.bridge_vertices.contains(&(j + 1)) {
            report.violations.push(Violation::UnsupportedColumn { column: j + 1 });
        }
    }

    if let Some(md) = problem.constraints.max_degree {
        let deg_a = problem.ga.degrees();
        let deg_b = problem.gb.degrees();
        for i in 0..n {
            let d = deg_a[i] + row_sums[i];
            if d > md {
                report.violations.push(Violation::MaxDegreeExceeded {
                    first_side: true,
                    vertex: i + 1,
                    degree: d,
                    limit: md,
                });
            }
        }
        for j in 0..m {
            let d = deg_b[j] + col_sums[j];
            if d > md {
                report.violations.push(Violation::MaxDegreeExceeded {
                    first_side: false,
                    vertex: j + 1,
                    degree: d,
                    limit: md,
                });
            }
        }
    }

    if let Some(rb) = &problem.constraints.row_bounds {
        for i in 0..n {
            let (lo, hi) = rb[i];
            if row_sums[i] < lo || row_sums[i] > hi {
                report.violations.push(Violation::RowSumOutOfBounds {
                    vertex: i + 1,
                    sum: row_sums[i],
                    lo,
                    hi,
                });
            }
        }
    }
    if let Some(cb) = &problem.constraints.col_bounds {
        for (pos, &v) in problem.bridge_vertices.iter().enumerate() {
            let (lo, hi) = cb[pos];
            let s = col_sums[v - 1];
            if s < lo || s > hi {
                report.violations.push(Violation::ColSumOutOfBounds {
                    column: v,
                    sum: s,
                    lo,
                    hi,
                });
            }
        }
    }
    report
}
