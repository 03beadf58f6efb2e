//! Search machinery behind the optimizer: instance normalization, the
//! branch-and-bound tree, exhaustive enumeration, and the coupling-norm
//! minimizations.
//!
//! A search instance flattens the bridge problem into integer row/column
//! bounds over the free 0/1 entries (degree caps are merged into those
//! bounds up front) plus float copies of the exact inverse adjacency
//! matrices. Patterns are manipulated in two forms: a vector of
//! [`EntryState`] for partially pinned nodes, and a packed bitmask for full
//! assignments. The mask packs entries row-major with the first entry in
//! the highest bit, so numeric mask order coincides with lexicographic
//! order of the vectorized pattern — the tie-break rule is a plain `<`.
//!
//! Branch-and-bound is best-bound-first. Every node is presolved to a
//! fixpoint (saturated bounds pin entries, forced bounds pin entries,
//! a lone free entry under the ≥ 1-edge rule is pinned to one); this both
//! prunes exactly and keeps the node relaxations strictly feasible. A
//! node's semidefinite relaxation value plus a safety margin (covering
//! solver tolerance and the duality gap) gives the subtree bound, clipped
//! by the parent's; nodes whose relaxation fails inherit the parent bound
//! unchanged. Leaves are scored by direct eigencomputation. The safety
//! margin keeps every potential tie leaf alive, which is what makes the
//! tie-break reproducible against plain enumeration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::bridging::BridgeProblem;
use crate::graph::BipartiteBridge;
use crate::linalg::{determinant, eigenvalues, rational_inverse, IntMatrix, Mat, RationalInverse, SymMatrix};
use crate::sdp::{
    gap_sdp, omega_sdp, solve_sdp, EntryState, KPattern, LinearSide, SdpSettings, SdpStatus,
    VarId,
};

use super::OptimizerError;
use num_traits::Zero;

/// Enumeration refuses above this many free 0/1 entries.
pub const ENUMERATION_BIT_LIMIT: usize = 22;

/// Tie tolerance on gap values: values this close count as equal and the
/// lexicographically smaller pattern wins.
const TIE_EPS: f64 = 1e-9;

/// A bridge problem flattened for search.
pub(crate) struct Instance {
    pub n: usize,
    pub m: usize,
    /// Admissible columns, 0-based, sorted.
    pub cols0: Vec<usize>,
    pub kb: usize,
    /// Inclusive bounds on bridge edges per first-graph vertex.
    pub row_lo: Vec<usize>,
    pub row_hi: Vec<usize>,
    /// Inclusive bounds per admissible column, aligned with `cols0`.
    pub col_lo: Vec<usize>,
    pub col_hi: Vec<usize>,
    pub a_int: IntMatrix,
    pub b_int: IntMatrix,
    /// Float copies of the exact inverses.
    pub a_hat: SymMatrix,
    pub b_hat: SymMatrix,
    /// Combined adjacency with K zeroed; leaves clone and fill.
    c_template: Mat,
    settings: SdpSettings,
}

impl Instance {
    pub fn new(problem: &BridgeProblem) -> Result<Self, OptimizerError> {
        let ga = problem.ga();
        let gb = problem.gb();
        let n = ga.n();
        let m = gb.n();
        let mut cols0: Vec<usize> = problem.bridge_vertices().iter().map(|&v| v - 1).collect();
        cols0.sort_unstable();
        let kb = cols0.len();

        let mut row_lo = vec![0usize; n];
        let mut row_hi = vec![kb; n];
        if let Some(rb) = &problem.constraints().row_bounds {
            for i in 0..n {
                row_lo[i] = rb[i].0;
                row_hi[i] = rb[i].1.min(kb);
            }
        }
        let mut col_lo = vec![0usize; kb];
        let mut col_hi = vec![n; kb];
        if let Some(cb) = &problem.constraints().col_bounds {
            for (declared_pos, &v) in problem.bridge_vertices().iter().enumerate() {
                let cpos = cols0.binary_search(&(v - 1)).expect("declared vertex is admissible");
                col_lo[cpos] = cb[declared_pos].0;
                col_hi[cpos] = cb[declared_pos].1.min(n);
            }
        }

        if let Some(md) = problem.constraints().max_degree {
            for (i, &d) in ga.degrees().iter().enumerate() {
                if d > md {
                    return Err(OptimizerError::Infeasible(format!(
                        "vertex {} of the first graph already has degree {d} > {md}",
                        i + 1
                    )));
                }
                row_hi[i] = row_hi[i].min(md - d);
            }
            for (j, &d) in gb.degrees().iter().enumerate() {
                if d > md {
                    return Err(OptimizerError::Infeasible(format!(
                        "vertex {} of the second graph already has degree {d} > {md}",
                        j + 1
                    )));
                }
                if let Ok(cpos) = cols0.binary_search(&j) {
                    col_hi[cpos] = col_hi[cpos].min(md - d);
                }
            }
        }

        for i in 0..n {
            if row_lo[i] > row_hi[i] {
                return Err(OptimizerError::Infeasible(format!(
                    "vertex {} of the first graph must carry at least {} bridge edges but may carry at most {}",
                    i + 1,
                    row_lo[i],
                    row_hi[i]
                )));
            }
        }
        for c in 0..kb {
            if col_lo[c] > col_hi[c] {
                return Err(OptimizerError::Infeasible(format!(
                    "vertex {} of the second graph must receive at least {} bridge edges but may receive at most {}",
                    cols0[c] + 1,
                    col_lo[c],
                    col_hi[c]
                )));
            }
        }
        let lo_rows: usize = row_lo.iter().sum();
        let hi_cols: usize = col_hi.iter().sum();
        let lo_cols: usize = col_lo.iter().sum();
        let hi_rows: usize = row_hi.iter().sum();
        if lo_rows > hi_cols || lo_cols > hi_rows {
            return Err(OptimizerError::Infeasible(
                "row and column bounds demand incompatible edge totals".into(),
            ));
        }
        if hi_cols == 0 {
            return Err(OptimizerError::Infeasible(
                "no bridge edge can be placed under the bounds".into(),
            ));
        }

        let a_int = ga.adjacency_int();
        let b_int = gb.adjacency_int();
        let a_hat = match rational_inverse(&a_int)? {
            RationalInverse::Invertible(inv) => inv.to_sym(),
            RationalInverse::Singular => {
                return Err(OptimizerError::Fault("validated first graph is singular".into()))
            }
        };
        let b_hat = match rational_inverse(&b_int)? {
            RationalInverse::Invertible(inv) => inv.to_sym(),
            RationalInverse::Singular => {
                return Err(OptimizerError::Fault("validated second graph is singular".into()))
            }
        };

        let t = n + m;
        let mut c_template = Mat::zeros(t, t);
        for i in 0..n {
            for j in 0..n {
                if a_int.get(i, j) != 0 {
                    c_template.set(i, j, 1.0);
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                if b_int.get(i, j) != 0 {
                    c_template.set(n + i, n + j, 1.0);
                }
            }
        }

        Ok(Instance {
            n,
            m,
            cols0,
            kb,
            row_lo,
            row_hi,
            col_lo,
            col_hi,
            a_int,
            b_int,
            a_hat,
            b_hat,
            c_template,
            settings: SdpSettings::default(),
        })
    }

    pub fn bits(&self) -> usize {
        self.n * self.kb
    }

    /// Bit index of pattern position `p` in the packed mask (first position
    /// in the most significant bit).
    #[inline]
    fn bit(&self, p: usize) -> u64 {
        1u64 << (self.bits() - 1 - p)
    }

    fn side(&self) -> LinearSide {
        LinearSide {
            row: (0..self.n).map(|i| (self.row_lo[i] as f64, Some(self.row_hi[i] as f64))).collect(),
            col: (0..self.kb).map(|c| (self.col_lo[c] as f64, Some(self.col_hi[c] as f64))).collect(),
            require_edge: true,
        }
    }

    pub fn mask_feasible(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        for i in 0..self.n {
            let mut s = 0usize;
            for c in 0..self.kb {
                if mask & self.bit(i * self.kb + c) != 0 {
                    s += 1;
                }
            }
            if s < self.row_lo[i] || s > self.row_hi[i] {
                return false;
            }
        }
        for c in 0..self.kb {
            let mut s = 0usize;
            for i in 0..self.n {
                if mask & self.bit(i * self.kb + c) != 0 {
                    s += 1;
                }
            }
            if s < self.col_lo[c] || s > self.col_hi[c] {
                return false;
            }
        }
        true
    }

    /// Spectrum of the bridged adjacency for a full assignment, descending.
    pub fn leaf_spectrum(&self, mask: u64) -> Result<Vec<f64>, OptimizerError> {
        let mut c = self.c_template.clone();
        for p in 0..self.bits() {
            if mask & self.bit(p) != 0 {
                let i = p / self.kb;
                let j = self.n + self.cols0[p % self.kb];
                c.set(i, j, 1.0);
                c.set(j, i, 1.0);
            }
        }
        Ok(eigenvalues(&SymMatrix::from_mat(&c))?)
    }

    /// Gap, μ and η of a full assignment by direct eigencomputation.
    pub fn leaf_gap(&self, mask: u64) -> Result<(f64, f64, f64), OptimizerError> {
        Ok(classify_values(&self.leaf_spectrum(mask)?))
    }

    /// Exact largest eigenvalue of `B⁻¹KᵀKB⁻¹` for a full assignment,
    /// computed on the smaller of the two Gram sides.
    pub fn leaf_omega(&self, mask: u64) -> Result<f64, OptimizerError> {
        // D = K·B⁻¹ is n×m; its rows are sums of B⁻¹ rows picked by K.
        let mut d = Mat::zeros(self.n, self.m);
        for p in 0..self.bits() {
            if mask & self.bit(p) != 0 {
                let i = p / self.kb;
                let col = self.cols0[p % self.kb];
                for j in 0..self.m {
                    d.add_to(i, j, self.b_hat.get(col, j));
                }
            }
        }
        let gram = if self.n <= self.m {
            d.matmul(&d.transpose())
        } else {
            d.transpose().matmul(&d)
        };
        let values = eigenvalues(&SymMatrix::from_mat(&gram))?;
        Ok(values.first().copied().unwrap_or(0.0).max(0.0))
    }

    /// Integer K matrix (n×m) for a full assignment.
    pub fn mask_to_k(&self, mask: u64) -> IntMatrix {
        let mut k = IntMatrix::zeros(self.n, self.m);
        for p in 0..self.bits() {
            if mask & self.bit(p) != 0 {
                k.set(p / self.kb, self.cols0[p % self.kb], 1);
            }
        }
        k
    }
}

/// Gap, μ = smallest positive eigenvalue and η = −(largest negative) from a
/// spectrum; all zero if any eigenvalue is numerically zero.
pub(crate) fn classify_values(values: &[f64]) -> (f64, f64, f64) {
    let amax = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let thresh = 1e-9 * (1.0 + amax);
    if values.iter().any(|v| v.abs() <= thresh) {
        return (0.0, 0.0, 0.0);
    }
    let mut pos = f64::INFINITY;
    let mut neg = f64::NEG_INFINITY;
    for &v in values {
        if v > 0.0 {
            pos = pos.min(v);
        } else {
            neg = neg.max(v);
        }
    }
    if !pos.is_finite() || !neg.is_finite() {
        // A traceless invertible symmetric matrix has eigenvalues of both
        // signs; reaching this would mean the input was not one.
        return (0.0, 0.0, 0.0);
    }
    (pos - neg, pos, -neg)
}

/// Best assignment seen so far. Values within [`TIE_EPS`] count as ties and
/// the smaller mask (lexicographically smaller pattern) wins.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Incumbent {
    pub value: f64,
    pub mask: u64,
    pub any: bool,
}

impl Incumbent {
    pub fn new() -> Self {
        Incumbent { value: f64::NEG_INFINITY, mask: u64::MAX, any: false }
    }

    pub fn offer(&mut self, value: f64, mask: u64) -> bool {
        let better = !self.any
            || value > self.value + TIE_EPS
            || (value >= self.value - TIE_EPS && mask < self.mask);
        if better {
            *self = Incumbent { value, mask, any: true };
        }
        better
    }
}

/// Pins implied by the row/column bounds, applied to a fixpoint.
/// `None` means the node cannot contain any feasible assignment.
pub(crate) fn presolve(inst: &Instance, mut st: Vec<EntryState>) -> Option<Vec<EntryState>> {
    let kb = inst.kb;
    loop {
        let mut changed = false;
        for i in 0..inst.n {
            let mut ones = 0usize;
            let mut free = 0usize;
            for c in 0..kb {
                match st[i * kb + c] {
                    EntryState::One => ones += 1,
                    EntryState::Free => free += 1,
                    EntryState::Zero => {}
                }
            }
            if ones > inst.row_hi[i] || ones + free < inst.row_lo[i] {
                return None;
            }
            if free > 0 && ones == inst.row_hi[i] {
                for c in 0..kb {
                    if st[i * kb + c] == EntryState::Free {
                        st[i * kb + c] = EntryState::Zero;
                    }
                }
                changed = true;
            } else if free > 0 && ones + free == inst.row_lo[i] {
                for c in 0..kb {
                    if st[i * kb + c] == EntryState::Free {
                        st[i * kb + c] = EntryState::One;
                    }
                }
                changed = true;
            }
        }
        for c in 0..kb {
            let mut ones = 0usize;
            let mut free = 0usize;
            for i in 0..inst.n {
                match st[i * kb + c] {
                    EntryState::One => ones += 1,
                    EntryState::Free => free += 1,
                    EntryState::Zero => {}
                }
            }
            if ones > inst.col_hi[c] || ones + free < inst.col_lo[c] {
                return None;
            }
            if free > 0 && ones == inst.col_hi[c] {
                for i in 0..inst.n {
                    if st[i * kb + c] == EntryState::Free {
                        st[i * kb + c] = EntryState::Zero;
                    }
                }
                changed = true;
            } else if free > 0 && ones + free == inst.col_lo[c] {
                for i in 0..inst.n {
                    if st[i * kb + c] == EntryState::Free {
                        st[i * kb + c] = EntryState::One;
                    }
                }
                changed = true;
            }
        }
        let ones_total = st.iter().filter(|s| matches!(s, EntryState::One)).count();
        let free_total = st.iter().filter(|s| s.is_free()).count();
        if ones_total + free_total == 0 {
            return None;
        }
        if ones_total == 0 && free_total == 1 {
            let p = st.iter().position(|s| s.is_free()).unwrap();
            st[p] = EntryState::One;
            changed = true;
        }
        if !changed {
            return Some(st);
        }
    }
}

fn states_to_mask(inst: &Instance, st: &[EntryState]) -> u64 {
    let mut mask = 0u64;
    for (p, s) in st.iter().enumerate() {
        if matches!(s, EntryState::One) {
            mask |= inst.bit(p);
        }
    }
    mask
}

/// The two maximization objectives share one branch-and-bound; this trait
/// supplies the node relaxation and the leaf score.
pub(crate) trait SearchObjective {
    /// Upper-bounding relaxation at a partially pinned node.
    fn relax(&self, inst: &Instance, pat: &KPattern) -> Result<NodeRelaxationResult, OptimizerError>;
    /// Exact value of a full assignment (the quantity being maximized).
    fn leaf(&self, inst: &Instance, mask: u64) -> Result<f64, OptimizerError>;
}

pub(crate) struct NodeRelaxationResult {
    objective: Option<(f64, f64, Vec<f64>, Vec<Option<VarId>>)>,
    infeasible: bool,
}

/// Maximize the spectral gap of the bridged graph.
pub(crate) struct GapObjective;

impl SearchObjective for GapObjective {
    fn relax(&self, inst: &Instance, pat: &KPattern) -> Result<NodeRelaxationResult, OptimizerError> {
        let assembled = match gap_sdp(&inst.a_hat, &inst.b_hat, pat, &inst.side()) {
            Ok(a) => a,
            Err(crate::sdp::AssembleError::Infeasible(_)) => {
                return Ok(NodeRelaxationResult { objective: None, infeasible: true })
            }
            Err(e) => return Err(e.into()),
        };
        let sol = solve_sdp(&assembled.problem, &inst.settings)?;
        if sol.status == SdpStatus::Optimal {
            let margin = (1e-7 * (1.0 + sol.objective.abs())).max(sol.duality_gap);
            Ok(NodeRelaxationResult {
                objective: Some((sol.objective, margin, sol.x, assembled.k_vars)),
                infeasible: false,
            })
        } else {
            Ok(NodeRelaxationResult { objective: None, infeasible: false })
        }
    }

    fn leaf(&self, inst: &Instance, mask: u64) -> Result<f64, OptimizerError> {
        Ok(inst.leaf_gap(mask)?.0)
    }
}

/// Maximize `−ω`, i.e. minimize the coupling norm `λ_max(B⁻¹KᵀKB⁻¹)`.
pub(crate) struct NegOmegaObjective;

impl SearchObjective for NegOmegaObjective {
    fn relax(&self, inst: &Instance, pat: &KPattern) -> Result<NodeRelaxationResult, OptimizerError> {
        let assembled = match omega_sdp(&inst.b_hat, inst.n, pat, &inst.side()) {
            Ok(a) => a,
            Err(crate::sdp::AssembleError::Infeasible(_)) => {
                return Ok(NodeRelaxationResult { objective: None, infeasible: true })
            }
            Err(e) => return Err(e.into()),
        };
        let sol = solve_sdp(&assembled.problem, &inst.settings)?;
        if sol.status == SdpStatus::Optimal {
            let margin = (1e-7 * (1.0 + sol.objective.abs())).max(sol.duality_gap);
            Ok(NodeRelaxationResult {
                objective: Some((sol.objective, margin, sol.x, assembled.k_vars)),
                infeasible: false,
            })
        } else {
            Ok(NodeRelaxationResult { objective: None, infeasible: false })
        }
    }

    fn leaf(&self, inst: &Instance, mask: u64) -> Result<f64, OptimizerError> {
        Ok(-inst.leaf_omega(mask)?)
    }
}

struct Node {
    bound: f64,
    seq: u64,
    states: Vec<EntryState>,
    branch_pos: Option<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap: larger bound first; among equal bounds, earlier node.
        self.bound.total_cmp(&other.bound).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Best-bound-first branch-and-bound over partially pinned patterns.
/// Returns the incumbent and the number of nodes processed.
pub(crate) fn branch_and_bound(
    inst: &Instance,
    objective: &dyn SearchObjective,
) -> Result<(Incumbent, u64), OptimizerError> {
    let bits = inst.bits();
    let mut incumbent = Incumbent::new();
    let mut nodes: u64 = 0;
    let mut seq: u64 = 0;
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();

    // Greedy initial incumbent: every feasible single-edge assignment.
    for p in 0..bits {
        let mask = inst.bit(p);
        if inst.mask_feasible(mask) {
            let v = objective.leaf(inst, mask)?;
            incumbent.offer(v, mask);
        }
    }

    // The presolve rules are exact, so a dead root means no feasible K.
    let root = presolve(inst, vec![EntryState::Free; bits])
        .ok_or_else(|| OptimizerError::Infeasible("no 0/1 pattern satisfies the bounds".into()))?;

    // Examine a presolved pattern: score it if complete, otherwise bound it
    // and queue it.
    let admit = |st: Vec<EntryState>,
                     parent_bound: f64,
                     incumbent: &mut Incumbent,
                     heap: &mut BinaryHeap<Node>,
                     nodes: &mut u64,
                     seq: &mut u64|
     -> Result<(), OptimizerError> {
        *nodes += 1;
        if st.iter().all(|s| !s.is_free()) {
            let mask = states_to_mask(inst, &st);
            let v = objective.leaf(inst, mask)?;
            incumbent.offer(v, mask);
            return Ok(());
        }
        let pat = KPattern::new(inst.n, inst.m, inst.cols0.clone(), st.clone())?;
        let relaxed = objective.relax(inst, &pat)?;
        if relaxed.infeasible {
            return Ok(());
        }
        let (bound, branch_pos) = match relaxed.objective {
            Some((obj, margin, x, k_vars)) => {
                // Offer the rounded point when the relaxation is integral.
                let mut integral = true;
                let mut rounded = 0u64;
                for (p, s) in st.iter().enumerate() {
                    let v = match s {
                        EntryState::One => 1.0,
                        EntryState::Zero => 0.0,
                        EntryState::Free => {
                            let var = k_vars[p].expect("free entries carry variables");
                            x[var.0]
                        }
                    };
                    if (v - v.round()).abs() > 1e-6 {
                        integral = false;
                    }
                    if v.round() == 1.0 {
                        rounded |= inst.bit(p);
                    }
                }
                if integral && inst.mask_feasible(rounded) {
                    let v = objective.leaf(inst, rounded)?;
                    incumbent.offer(v, rounded);
                }
                // Most fractional free entry; ties to the smallest position.
                let mut best_pos = None;
                let mut best_score = -1.0;
                for (p, s) in st.iter().enumerate() {
                    if s.is_free() {
                        let var = k_vars[p].expect("free entries carry variables");
                        let v = x[var.0].clamp(0.0, 1.0);
                        let score = v.min(1.0 - v);
                        if score > best_score + 1e-12 {
                            best_score = score;
                            best_pos = Some(p);
                        }
                    }
                }
                (parent_bound.min(obj + margin), best_pos)
            }
            None => (parent_bound, None),
        };
        if incumbent.any && bound <= incumbent.value + TIE_EPS {
            return Ok(());
        }
        heap.push(Node { bound, seq: *seq, states: st, branch_pos });
        *seq += 1;
        Ok(())
    };

    admit(root, f64::INFINITY, &mut incumbent, &mut heap, &mut nodes, &mut seq)?;

    while let Some(node) = heap.pop() {
        if incumbent.any && node.bound <= incumbent.value + TIE_EPS {
            // Best-bound order: every remaining node is at most this bound.
            break;
        }
        let bp = node
            .branch_pos
            .or_else(|| node.states.iter().position(|s| s.is_free()))
            .expect("queued nodes have free entries");
        for value in [EntryState::One, EntryState::Zero] {
            let mut child = node.states.clone();
            child[bp] = value;
            if let Some(st) = presolve(inst, child) {
                admit(st, node.bound, &mut incumbent, &mut heap, &mut nodes, &mut seq)?;
            }
        }
    }

    if !incumbent.any {
        return Err(OptimizerError::Infeasible("no 0/1 pattern satisfies the bounds".into()));
    }
    Ok((incumbent, nodes))
}

/// Exhaustive scan over all full assignments. Returns the incumbent and the
/// number of feasible assignments.
pub(crate) fn enumerate(
    inst: &Instance,
    objective: &dyn SearchObjective,
) -> Result<(Incumbent, u64), OptimizerError> {
    let bits = inst.bits();
    if bits > ENUMERATION_BIT_LIMIT {
        return Err(OptimizerError::BudgetExceeded { bits });
    }
    let mut incumbent = Incumbent::new();
    let mut feasible: u64 = 0;
    for mask in 1..(1u64 << bits) {
        if inst.mask_feasible(mask) {
            feasible += 1;
            let v = objective.leaf(inst, mask)?;
            incumbent.offer(v, mask);
        }
    }
    if !incumbent.any {
        return Err(OptimizerError::Infeasible("no 0/1 pattern satisfies the bounds".into()));
    }
    Ok((incumbent, feasible))
}

/// Exact minimum coupling norm over admissible 0/1 patterns.
pub(crate) fn omega_binary(inst: &Instance) -> Result<f64, OptimizerError> {
    if inst.bits() <= ENUMERATION_BIT_LIMIT {
        let (inc, _) = enumerate(inst, &NegOmegaObjective)?;
        return Ok(-inc.value);
    }
    let no_lower_bounds =
        inst.row_lo.iter().all(|&l| l == 0) && inst.col_lo.iter().all(|&l| l == 0);
    if no_lower_bounds && inst.kb <= 20 {
        // The largest singular value of a matrix dominates every row norm,
        // and equals the row norm when only one row is nonzero. With no
        // lower bounds, zeroing all rows but one of a feasible K stays
        // feasible, so the minimum is attained at a single nonzero row and
        // only its column subset matters.
        let max_row_cap = inst.row_hi.iter().copied().max().unwrap_or(0);
        let mut best: Option<f64> = None;
        for subset in 1u32..(1u32 << inst.kb) {
            let size = subset.count_ones() as usize;
            if size > max_row_cap {
                continue;
            }
            if (0..inst.kb).any(|c| subset >> c & 1 == 1 && inst.col_hi[c] == 0) {
                continue;
            }
            let mut norm_sq = 0.0;
            for j in 0..inst.m {
                let mut v = 0.0;
                for c in 0..inst.kb {
                    if subset >> c & 1 == 1 {
                        v += inst.b_hat.get(inst.cols0[c], j);
                    }
                }
                norm_sq += v * v;
            }
            best = Some(best.map_or(norm_sq, |b: f64| b.min(norm_sq)));
        }
        return best.ok_or_else(|| {
            OptimizerError::Infeasible("no 0/1 pattern satisfies the bounds".into())
        });
    }
    let (inc, _) = branch_and_bound(inst, &NegOmegaObjective)?;
    Ok(-inc.value)
}

/// Minimum coupling norm over the box relaxation `0 ≤ K ≤ 1` of the
/// admissible patterns.
pub(crate) fn omega_relaxed(inst: &Instance) -> Result<f64, OptimizerError> {
    let root = presolve(inst, vec![EntryState::Free; inst.bits()])
        .ok_or_else(|| OptimizerError::Infeasible("no 0/1 pattern satisfies the bounds".into()))?;
    let pat = KPattern::new(inst.n, inst.m, inst.cols0.clone(), root)?;
    let assembled = omega_sdp(&inst.b_hat, inst.n, &pat, &inst.side())?;
    let sol = solve_sdp(&assembled.problem, &inst.settings)?;
    if sol.status != SdpStatus::Optimal {
        return Err(OptimizerError::Solver(format!(
            "coupling-norm relaxation ended with status {:?}",
            sol.status
        )));
    }
    Ok(-sol.objective)
}

/// Optimal objective of the continuous gap relaxation (boxes `0 ≤ K ≤ 1`).
pub(crate) fn relaxed_gap(inst: &Instance) -> Result<f64, OptimizerError> {
    let root = presolve(inst, vec![EntryState::Free; inst.bits()])
        .ok_or_else(|| OptimizerError::Infeasible("no 0/1 pattern satisfies the bounds".into()))?;
    if root.iter().all(|s| !s.is_free()) {
        // Fully forced pattern: the relaxation collapses to its only point.
        let mask = states_to_mask(inst, &root);
        return Ok(inst.leaf_gap(mask)?.0);
    }
    let pat = KPattern::new(inst.n, inst.m, inst.cols0.clone(), root)?;
    let assembled = gap_sdp(&inst.a_hat, &inst.b_hat, &pat, &inst.side())?;
    let sol = solve_sdp(&assembled.problem, &inst.settings)?;
    if sol.status != SdpStatus::Optimal {
        return Err(OptimizerError::Solver(format!(
            "gap relaxation ended with status {:?}",
            sol.status
        )));
    }
    Ok(sol.objective)
}

/// Turns a winning mask into a certified [`BridgeSolution`] payload:
/// rebuilds the pattern, cross-checks float singularity against the exact
/// determinant, and re-validates the constraints.
pub(crate) fn certify(
    problem: &BridgeProblem,
    inst: &Instance,
    incumbent: &Incumbent,
) -> Result<(BipartiteBridge, f64, f64, f64, Vec<f64>), OptimizerError> {
    let k = inst.mask_to_k(incumbent.mask);
    let columns: Vec<usize> = inst.cols0.iter().map(|&c| c + 1).collect();
    let bridge = BipartiteBridge::new(k, columns)
        .map_err(|e| OptimizerError::Fault(format!("winning pattern malformed: {e}")))?;

    let t = inst.n + inst.m;
    let mut c_int = IntMatrix::zeros(t, t);
    for i in 0..t {
        for j in 0..t {
            let v = if i < inst.n && j < inst.n {
                inst.a_int.get(i, j)
            } else if i >= inst.n && j >= inst.n {
                inst.b_int.get(i - inst.n, j - inst.n)
            } else if i < inst.n {
                bridge.k().get(i, j - inst.n)
            } else {
                bridge.k().get(j, i - inst.n)
            };
            c_int.set(i, j, v);
        }
    }
    let exact_invertible = !determinant(&c_int)?.is_zero();

    let spectrum = inst.leaf_spectrum(incumbent.mask)?;
    let (gap, mu, eta) = classify_values(&spectrum);
    // classify_values reports a positive gap exactly when no eigenvalue is
    // numerically zero.
    let float_invertible = gap > 0.0;
    if exact_invertible != float_invertible {
        return Err(OptimizerError::Fault(
            "eigenvalue singularity test disagrees with the exact determinant".into(),
        ));
    }

    let report = crate::bridging::validate_bridge(problem, &bridge);
    if !report.ok() {
        return Err(OptimizerError::Fault(format!(
            "winning pattern violates the constraints it was searched under: {report}"
        )));
    }
    Ok((bridge, gap, mu, eta, spectrum))
}
