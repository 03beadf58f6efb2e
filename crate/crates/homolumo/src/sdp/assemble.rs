//! Builders that translate gap / coupling problems into LMI form.
//!
//! All of them work over the *inverses* of the two adjacency matrices: for
//! an invertible symmetric C, the smallest positive eigenvalue is
//! `max { μ ≥ 0 : I − μC⁻¹ ⪰ 0 }` and the magnitude of the largest negative
//! one is `max { η ≥ 0 : I + ηC⁻¹ ⪰ 0 }`, so the spectral gap is the sum of
//! the two. For a bridged matrix `[[A, K], [Kᵀ, B]]` whose coupling K lives
//! on columns where B⁻¹ vanishes, a congruence turns those two constraints
//! into blocks that are *affine* in K — except for one KᵀK product, which is
//! replaced by a symmetric matrix variable W tied to K by
//!
//! ```text
//!     [[W, Kᵀ], [K, I]] ⪰ 0        (so W ⪰ KᵀK)
//!     W_cc = Σᵢ K_ic               (equality, eliminated by substitution)
//! ```
//!
//! At 0/1 values of K the two force W = KᵀK exactly, so the continuous
//! relaxation (K in boxes) is exact at binary points; this is what the
//! branch-and-bound search relies on. Entries of K may be pinned to 0/1
//! individually ([`EntryState`]), which is how search nodes are encoded.
//! Columns whose entries are all pinned are eliminated from the coupling
//! block entirely — their W rows are forced anyway, and keeping them would
//! leave the LMI with no strictly feasible point for the interior-point
//! method to work with.

use thiserror::Error;

use crate::linalg::SymMatrix;

use super::{SdpProblem, VarId};

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("infeasible by counting: {0}")]
    Infeasible(String),
}

/// State of one K entry in a (partially) pinned pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryState {
    Free,
    Zero,
    One,
}

impl EntryState {
    pub fn is_free(self) -> bool {
        matches!(self, EntryState::Free)
    }

    pub fn fixed_value(self) -> Option<f64> {
        match self {
            EntryState::Free => None,
            EntryState::Zero => Some(0.0),
            EntryState::One => Some(1.0),
        }
    }
}

/// A (partially) pinned 0/1 pattern for the coupling matrix K.
///
/// Only the admissible columns are represented: `states` is row-major over
/// `(row of the first graph, position within `cols`)`.
#[derive(Debug, Clone)]
pub struct KPattern {
    pub n: usize,
    pub m: usize,
    /// 0-based admissible column indices, strictly increasing.
    pub cols: Vec<usize>,
    pub states: Vec<EntryState>,
}

impl KPattern {
    pub fn new(n: usize, m: usize, cols: Vec<usize>, states: Vec<EntryState>) -> Result<Self, AssembleError> {
        if cols.is_empty() {
            return Err(AssembleError::Dimension("no admissible columns".into()));
        }
        if cols.windows(2).any(|w| w[0] >= w[1]) || cols.iter().any(|&c| c >= m) {
            return Err(AssembleError::Dimension("admissible columns must be strictly increasing and in range".into()));
        }
        if states.len() != n * cols.len() {
            return Err(AssembleError::Dimension(format!(
                "pattern has {} states, expected {}",
                states.len(),
                n * cols.len()
            )));
        }
        Ok(KPattern { n, m, cols, states })
    }

    /// All entries free.
    pub fn free(n: usize, m: usize, cols: Vec<usize>) -> Result<Self, AssembleError> {
        let k = cols.len();
        KPattern::new(n, m, cols, vec![EntryState::Free; n * k])
    }

    pub fn k_b(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn pos(&self, row: usize, col_pos: usize) -> usize {
        row * self.cols.len() + col_pos
    }

    pub fn state(&self, row: usize, col_pos: usize) -> EntryState {
        self.states[self.pos(row, col_pos)]
    }

    /// True if the given admissible-column position has no free entries left.
    pub fn column_fixed(&self, col_pos: usize) -> bool {
        (0..self.n).all(|i| !self.state(i, col_pos).is_free())
    }

    pub fn free_count(&self) -> usize {
        self.states.iter().filter(|s| s.is_free()).count()
    }

    pub fn ones_count(&self) -> usize {
        self.states.iter().filter(|s| matches!(s, EntryState::One)).count()
    }
}

/// Linear side constraints on the K row/column sums.
///
/// `row` has one `(lo, hi)` pair per row of the first graph; `col` one pair
/// per admissible column (aligned with `KPattern::cols`). `hi = None` means
/// unconstrained above. Degree caps are folded into these bounds by the
/// caller before assembly.
#[derive(Debug, Clone)]
pub struct LinearSide {
    pub row: Vec<(f64, Option<f64>)>,
    pub col: Vec<(f64, Option<f64>)>,
    /// Require at least one bridge edge in total.
    pub require_edge: bool,
}

impl LinearSide {
    /// No bounds beyond "at least one edge".
    pub fn unconstrained(n: usize, k_b: usize) -> Self {
        LinearSide {
            row: vec![(0.0, None); n],
            col: vec![(0.0, None); k_b],
            require_edge: true,
        }
    }
}

/// An affine expression `c + Σ coeffᵢ·xᵢ` used during assembly.
#[derive(Debug, Clone, Default)]
struct Affine {
    c: f64,
    terms: Vec<(VarId, f64)>,
}

/// Assembled gap maximization problem; `objective = μ + η`.
#[derive(Debug, Clone)]
pub struct GapSdp {
    pub problem: SdpProblem,
    pub mu: VarId,
    pub eta: VarId,
    /// Aligned with `KPattern::states`; `None` for pinned entries.
    pub k_vars: Vec<Option<VarId>>,
}

/// Assembled coupling-norm minimization; the optimum is `−objective`.
#[derive(Debug, Clone)]
pub struct OmegaSdp {
    pub problem: SdpProblem,
    pub omega: VarId,
    pub k_vars: Vec<Option<VarId>>,
}

/// Declares one box-bounded [0, 1] variable per free K entry.
fn declare_k_vars(p: &mut SdpProblem, pat: &KPattern) -> Vec<Option<VarId>> {
    let mut vars = Vec::with_capacity(pat.states.len());
    for i in 0..pat.n {
        for (cpos, &c) in pat.cols.iter().enumerate() {
            vars.push(match pat.state(i, cpos) {
                EntryState::Free => {
                    let v = p.add_var(format!("K_{}_{}", i + 1, c + 1), 0.0);
                    p.add_lower_bound(v, 0.0);
                    p.add_upper_bound(v, 1.0);
                    Some(v)
                }
                _ => None,
            });
        }
    }
    vars
}

/// Emits the shared counting constraints (total / row / column sums).
fn add_count_rows(
    p: &mut SdpProblem,
    pat: &KPattern,
    k_vars: &[Option<VarId>],
    side: &LinearSide,
) -> Result<(), AssembleError> {
    if side.row.len() != pat.n || side.col.len() != pat.k_b() {
        return Err(AssembleError::Dimension(format!(
            "side constraints sized {}x{}, pattern is {}x{}",
            side.row.len(),
            side.col.len(),
            pat.n,
            pat.k_b()
        )));
    }

    // One constraint over an affine count: cfix + Σ free vars ∈ [lo, hi].
    let emit = |p: &mut SdpProblem, label: String, vars: &[VarId], cfix: f64, lo: f64, hi: Option<f64>| -> Result<(), AssembleError> {
        let nfree = vars.len() as f64;
        if let Some(hi) = hi {
            if cfix > hi + 1e-9 {
                return Err(AssembleError::Infeasible(format!("{label}: already {cfix} > {hi}")));
            }
            // Only emit when the box bounds alone cannot imply it.
            if cfix + nfree > hi + 1e-9 {
                let coeffs: Vec<(VarId, f64)> = vars.iter().map(|&v| (v, -1.0)).collect();
                p.add_scalar_ge(&coeffs, cfix - hi, format!("{label} <= {hi}"));
            }
        }
        if lo > 1e-9 {
            if cfix + nfree < lo - 1e-9 {
                return Err(AssembleError::Infeasible(format!(
                    "{label}: at most {} available, {lo} required",
                    cfix + nfree
                )));
            }
            if cfix < lo - 1e-9 {
                let coeffs: Vec<(VarId, f64)> = vars.iter().map(|&v| (v, 1.0)).collect();
                p.add_scalar_ge(&coeffs, lo - cfix, format!("{label} >= {lo}"));
            }
        }
        Ok(())
    };

    for i in 0..pat.n {
        let mut vars = Vec::new();
        let mut cfix = 0.0;
        for cpos in 0..pat.k_b() {
            match (pat.state(i, cpos), k_vars[pat.pos(i, cpos)]) {
                (EntryState::One, _) => cfix += 1.0,
                (EntryState::Free, Some(v)) => vars.push(v),
                _ => {}
            }
        }
        let (lo, hi) = side.row[i];
        emit(p, format!("row {} sum", i + 1), &vars, cfix, lo, hi)?;
    }
    for (cpos, &c) in pat.cols.iter().enumerate() {
        let mut vars = Vec::new();
        let mut cfix = 0.0;
        for i in 0..pat.n {
            match (pat.state(i, cpos), k_vars[pat.pos(i, cpos)]) {
                (EntryState::One, _) => cfix += 1.0,
                (EntryState::Free, Some(v)) => vars.push(v),
                _ => {}
            }
        }
        let (lo, hi) = side.col[cpos];
        emit(p, format!("column {} sum", c + 1), &vars, cfix, lo, hi)?;
    }
    if side.require_edge {
        let vars: Vec<VarId> = k_vars.iter().flatten().copied().collect();
        let cfix = pat.ones_count() as f64;
        if cfix + (vars.len() as f64) < 1.0 - 1e-9 {
            return Err(AssembleError::Infeasible("no bridge edge can be placed".into()));
        }
        if cfix < 1.0 - 1e-9 {
            let coeffs: Vec<(VarId, f64)> = vars.iter().map(|&v| (v, 1.0)).collect();
            p.add_scalar_ge(&coeffs, 1.0, "total edges >= 1");
        }
    }
    Ok(())
}

/// The affine value of W_pq (product of admissible columns p and q of K)
/// given the pinning pattern and, where both columns keep free entries, the
/// dedicated W variable.
fn w_value(
    pat: &KPattern,
    k_vars: &[Option<VarId>],
    w_vars: &[Option<VarId>],
    p_pos: usize,
    q_pos: usize,
) -> Affine {
    let kb = pat.k_b();
    let (p_pos, q_pos) = if p_pos <= q_pos { (p_pos, q_pos) } else { (q_pos, p_pos) };
    if p_pos == q_pos {
        // Diagonal: W_pp = Σᵢ K_ip (the eliminated equality).
        let mut a = Affine::default();
        for i in 0..pat.n {
            match (pat.state(i, p_pos), k_vars[pat.pos(i, p_pos)]) {
                (EntryState::One, _) => a.c += 1.0,
                (EntryState::Free, Some(v)) => a.terms.push((v, 1.0)),
                _ => {}
            }
        }
        return a;
    }
    if let Some(w) = w_vars[p_pos * kb + q_pos] {
        let mut a = Affine::default();
        a.terms.push((w, 1.0));
        return a;
    }
    // At least one column is fully pinned: W_pq = Σᵢ K_ip·K_iq is affine.
    let mut a = Affine::default();
    for i in 0..pat.n {
        let sp = pat.state(i, p_pos);
        let sq = pat.state(i, q_pos);
        match (sp.fixed_value(), sq.fixed_value()) {
            (Some(vp), Some(vq)) => a.c += vp * vq,
            (Some(vp), None) => {
                if vp != 0.0 {
                    a.terms.push((k_vars[pat.pos(i, q_pos)].unwrap(), vp));
                }
            }
            (None, Some(vq)) => {
                if vq != 0.0 {
                    a.terms.push((k_vars[pat.pos(i, p_pos)].unwrap(), vq));
                }
            }
            (None, None) => unreachable!("w_value called with both columns free but no W variable"),
        }
    }
    a
}

/// Builds the gap maximization problem
/// `max μ + η` over the two congruence blocks, the coupling block, boxes and
/// counting constraints. `a_inv` and `b_inv` are the inverse adjacency
/// matrices of the two graphs.
pub fn gap_sdp(
    a_inv: &SymMatrix,
    b_inv: &SymMatrix,
    pat: &KPattern,
    side: &LinearSide,
) -> Result<GapSdp, AssembleError> {
    let n = a_inv.order();
    let m = b_inv.order();
    if pat.n != n || pat.m != m {
        return Err(AssembleError::Dimension(format!(
            "pattern is {}x{}, graphs need {}x{}",
            pat.n, pat.m, n, m
        )));
    }
    let kb = pat.k_b();

    let mut p = SdpProblem::new();
    let mu = p.add_var("mu", 1.0);
    let eta = p.add_var("eta", 1.0);
    p.add_lower_bound(mu, 0.0);
    p.add_lower_bound(eta, 0.0);
    let k_vars = declare_k_vars(&mut p, pat);

    // W variables for pairs of columns that both keep at least one free
    // entry; all other products are affine in K. Off-diagonal W entries are
    // sign-constrained below like the K entries they stand for.
    let col_fixed: Vec<bool> = (0..kb).map(|c| pat.column_fixed(c)).collect();
    let mut w_vars: Vec<Option<VarId>> = vec![None; kb * kb];
    for p_pos in 0..kb {
        for q_pos in p_pos + 1..kb {
            if !col_fixed[p_pos] && !col_fixed[q_pos] {
                let v = p.add_var(
                    format!("W_{}_{}", pat.cols[p_pos] + 1, pat.cols[q_pos] + 1),
                    0.0,
                );
                p.add_lower_bound(v, 0.0);
                w_vars[p_pos * kb + q_pos] = Some(v);
            }
        }
    }

    // B⁻¹ columns restricted to the admissible set.
    let bcol: Vec<Vec<f64>> = pat
        .cols
        .iter()
        .map(|&c| (0..m).map(|r| b_inv.get(r, c)).collect())
        .collect();

    // The two congruence blocks, order n + m: rows 0..n belong to the first
    // graph, rows n..n+m to the second.
    for (sign, var, label) in [(1.0, mu, "gap upper"), (-1.0, eta, "gap lower")] {
        let blk = p.begin_block(label, n + m);
        for i in 0..n + m {
            p.add_const(blk, i, i, 1.0);
        }
        // −sign·var·diag(A⁻¹, B⁻¹)
        for i in 0..n {
            for j in 0..=i {
                let v = a_inv.get(i, j);
                if v != 0.0 {
                    p.add_coeff(blk, var, i, j, -sign * v);
                }
            }
        }
        for a in 0..m {
            for b in 0..=a {
                let v = b_inv.get(a, b);
                if v != 0.0 {
                    p.add_coeff(blk, var, n + a, n + b, -sign * v);
                }
            }
        }
        // Top-right coupling K·B⁻¹ (row i, column n+j).
        for i in 0..n {
            for (cpos, col) in bcol.iter().enumerate() {
                match (pat.state(i, cpos), k_vars[pat.pos(i, cpos)]) {
                    (EntryState::One, _) => {
                        for (j, &bv) in col.iter().enumerate() {
                            if bv != 0.0 {
                                p.add_const(blk, i, n + j, bv);
                            }
                        }
                    }
                    (EntryState::Free, Some(v)) => {
                        for (j, &bv) in col.iter().enumerate() {
                            if bv != 0.0 {
                                p.add_coeff(blk, v, i, n + j, bv);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        // Bottom-right B⁻¹·W·B⁻¹ expanded over column pairs.
        for p_pos in 0..kb {
            for q_pos in p_pos..kb {
                let w = w_value(pat, &k_vars, &w_vars, p_pos, q_pos);
                if w.c == 0.0 && w.terms.is_empty() {
                    continue;
                }
                let bp = &bcol[p_pos];
                let bq = &bcol[q_pos];
                for a in 0..m {
                    for b in 0..=a {
                        let g = if p_pos == q_pos {
                            bp[a] * bp[b]
                        } else {
                            bp[a] * bq[b] + bq[a] * bp[b]
                        };
                        if g == 0.0 {
                            continue;
                        }
                        if w.c != 0.0 {
                            p.add_const(blk, n + a, n + b, w.c * g);
                        }
                        for &(v, coeff) in &w.terms {
                            p.add_coeff(blk, v, n + a, n + b, coeff * g);
                        }
                    }
                }
            }
        }
    }

    // Coupling block [[W, Kᵀ], [K, I]] over the columns that still have free
    // entries (fully pinned columns are eliminated; see module docs).
    let live: Vec<usize> = (0..kb).filter(|&c| !col_fixed[c]).collect();
    if !live.is_empty() {
        let kf = live.len();
        let blk = p.begin_block("coupling", kf + n);
        for i in 0..n {
            p.add_const(blk, kf + i, kf + i, 1.0);
        }
        for (a, &p_pos) in live.iter().enumerate() {
            for (b, &q_pos) in live.iter().enumerate().take(a + 1) {
                let w = w_value(pat, &k_vars, &w_vars, q_pos, p_pos);
                if w.c != 0.0 {
                    p.add_const(blk, a, b, w.c);
                }
                for &(v, coeff) in &w.terms {
                    p.add_coeff(blk, v, a, b, coeff);
                }
            }
            for i in 0..n {
                match (pat.state(i, p_pos), k_vars[pat.pos(i, p_pos)]) {
                    (EntryState::One, _) => p.add_const(blk, a, kf + i, 1.0),
                    (EntryState::Free, Some(v)) => p.add_coeff(blk, v, a, kf + i, 1.0),
                    _ => {}
                }
            }
        }
    }

    add_count_rows(&mut p, pat, &k_vars, side)?;
    Ok(GapSdp { problem: p, mu, eta, k_vars })
}

/// Builds the coupling-norm problem: minimize the largest eigenvalue ω of
/// `B⁻¹KᵀKB⁻¹` over admissible K, as `max −ω` subject to
/// `[[ωI, B⁻¹Kᵀ], [KB⁻¹, I]] ⪰ 0` plus the usual boxes and counting rows.
pub fn omega_sdp(
    b_inv: &SymMatrix,
    n: usize,
    pat: &KPattern,
    side: &LinearSide,
) -> Result<OmegaSdp, AssembleError> {
    let m = b_inv.order();
    if pat.n != n || pat.m != m {
        return Err(AssembleError::Dimension(format!(
            "pattern is {}x{}, expected {}x{}",
            pat.n, pat.m, n, m
        )));
    }

    let mut p = SdpProblem::new();
    let omega = p.add_var("omega", -1.0);
    p.add_lower_bound(omega, 0.0);
    let k_vars = declare_k_vars(&mut p, pat);

    let blk = p.begin_block("coupling norm", m + n);
    for i in 0..n {
        p.add_const(blk, m + i, m + i, 1.0);
    }
    for j in 0..m {
        p.add_coeff(blk, omega, j, j, 1.0);
    }
    // Top-right (B⁻¹Kᵀ)_{j,i} = Σ_c B⁻¹_{j,c} K_{i,c} at (j, m+i).
    for i in 0..n {
        for (cpos, &c) in pat.cols.iter().enumerate() {
            match (pat.state(i, cpos), k_vars[pat.pos(i, cpos)]) {
                (EntryState::One, _) => {
                    for j in 0..m {
                        let bv = b_inv.get(j, c);
                        if bv != 0.0 {
                            p.add_const(blk, j, m + i, bv);
                        }
                    }
                }
                (EntryState::Free, Some(v)) => {
                    for j in 0..m {
                        let bv = b_inv.get(j, c);
                        if bv != 0.0 {
                            p.add_coeff(blk, v, j, m + i, bv);
                        }
                    }
                }
                _ => {}
            }
        }
    }

    add_count_rows(&mut p, pat, &k_vars, side)?;
    Ok(OmegaSdp { problem: p, omega, k_vars })
}

/// Gap of a single invertible graph through its inverse: `max μ + η` with
/// `I − μC⁻¹ ⪰ 0`, `I + ηC⁻¹ ⪰ 0`.
pub fn inverse_gap_sdp(c_inv: &SymMatrix) -> (SdpProblem, VarId, VarId) {
    let n = c_inv.order();
    let mut p = SdpProblem::new();
    let mu = p.add_var("mu", 1.0);
    let eta = p.add_var("eta", 1.0);
    p.add_lower_bound(mu, 0.0);
    p.add_lower_bound(eta, 0.0);
    for (sign, var, label) in [(1.0, mu, "upper side"), (-1.0, eta, "lower side")] {
        let blk = p.begin_block(label, n);
        for i in 0..n {
            p.add_const(blk, i, i, 1.0);
        }
        for i in 0..n {
            for j in 0..=i {
                let v = c_inv.get(i, j);
                if v != 0.0 {
                    p.add_coeff(blk, var, i, j, -sign * v);
                }
            }
        }
    }
    (p, mu, eta)
}

/// Largest eigenvalue as an LMI: `min t` s.t. `tI − M ⪰ 0`, returned as a
/// maximization of `−t`.
pub fn lambda_max_sdp(m: &SymMatrix) -> (SdpProblem, VarId) {
    let n = m.order();
    let mut p = SdpProblem::new();
    let t = p.add_var("t", -1.0);
    let blk = p.begin_block("tI - M", n);
    for i in 0..n {
        for j in 0..=i {
            let v = m.get(i, j);
            if v != 0.0 {
                p.add_const(blk, i, j, -v);
            }
        }
        p.add_coeff(blk, t, i, i, 1.0);
    }
    (p, t)
}

#[cfg(test)]
mod tests {
    use super::super::{solve_sdp, SdpSettings, SdpStatus};
    use super::*;
    use crate::linalg::symmetric_eigen;

    fn exchange2() -> SymMatrix {
        // [[0, 1], [1, 0]]: its own inverse; eigenvalues ±1.
        SymMatrix::from_fn(2, |i, j| if i != j { 1.0 } else { 0.0 })
    }

    fn solve(p: &SdpProblem) -> super::super::SdpSolution {
        let sol = solve_sdp(p, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal, "solver did not converge");
        sol
    }

    #[test]
    fn lambda_max_matches_eigensolver() {
        let m = SymMatrix::from_fn(3, |i, j| if i == j { i as f64 } else { 1.0 });
        let (p, _t) = lambda_max_sdp(&m);
        let sol = solve(&p);
        let lam = symmetric_eigen(&m, false).unwrap().values[0];
        assert!((-sol.objective - lam).abs() < 1e-6, "{} vs {lam}", -sol.objective);
    }

    #[test]
    fn inverse_gap_of_single_edge_is_two() {
        let (p, mu, eta) = inverse_gap_sdp(&exchange2());
        let sol = solve(&p);
        assert!((sol.objective - 2.0).abs() < 1e-6);
        assert!((sol.x[mu.0] - 1.0).abs() < 1e-6);
        assert!((sol.x[eta.0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fixed_coupling_reproduces_bridged_gap() {
        // Two single edges, both ends of the first graph tied to vertex 1 of
        // the second. The bridged graph has gap ≈ 1.311108.
        let ainv = exchange2();
        let binv = exchange2();
        let pat = KPattern::new(
            2,
            2,
            vec![0],
            vec![EntryState::One, EntryState::One],
        )
        .unwrap();
        let side = LinearSide::unconstrained(2, 1);
        let gap = gap_sdp(&ainv, &binv, &pat, &side).unwrap();
        let sol = solve(&gap.problem);
        assert!(
            (sol.objective - 1.311108).abs() < 1e-5,
            "objective = {}",
            sol.objective
        );
    }

    #[test]
    fn free_coupling_gives_the_relaxed_bound() {
        // Full box relaxation of the same instance; known value ≈ 1.67597.
        let ainv = exchange2();
        let binv = exchange2();
        let pat = KPattern::free(2, 2, vec![0]).unwrap();
        let side = LinearSide::unconstrained(2, 1);
        let gap = gap_sdp(&ainv, &binv, &pat, &side).unwrap();
        let sol = solve(&gap.problem);
        assert!(
            (sol.objective - 1.67597).abs() < 1e-4,
            "objective = {}",
            sol.objective
        );
    }

    #[test]
    fn omega_of_fixed_double_edge_is_two() {
        let binv = exchange2();
        let pat = KPattern::new(2, 2, vec![0], vec![EntryState::One, EntryState::One]).unwrap();
        let side = LinearSide::unconstrained(2, 1);
        let om = omega_sdp(&binv, 2, &pat, &side).unwrap();
        let sol = solve(&om.problem);
        assert!((-sol.objective - 2.0).abs() < 1e-6, "omega = {}", -sol.objective);
    }

    #[test]
    fn relaxed_omega_splits_the_edge() {
        // min λmax over box K with at least one edge: optimum at K = (½, ½),
        // ω = ½.
        let binv = exchange2();
        let pat = KPattern::free(2, 2, vec![0]).unwrap();
        let side = LinearSide::unconstrained(2, 1);
        let om = omega_sdp(&binv, 2, &pat, &side).unwrap();
        let sol = solve(&om.problem);
        assert!((-sol.objective - 0.5).abs() < 1e-6, "omega = {}", -sol.objective);
    }

    #[test]
    fn all_zero_pattern_with_required_edge_is_infeasible() {
        let binv = exchange2();
        let pat = KPattern::new(2, 2, vec![0], vec![EntryState::Zero, EntryState::Zero]).unwrap();
        let side = LinearSide::unconstrained(2, 1);
        match omega_sdp(&binv, 2, &pat, &side) {
            Err(AssembleError::Infeasible(_)) => {}
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn saturated_upper_bound_is_infeasible() {
        let binv = exchange2();
        let pat = KPattern::new(2, 2, vec![0], vec![EntryState::One, EntryState::Free]).unwrap();
        let mut side = LinearSide::unconstrained(2, 1);
        side.col[0] = (0.0, Some(0.0));
        match gap_sdp(&exchange2(), &binv, &pat, &side) {
            Err(AssembleError::Infeasible(_)) => {}
            other => panic!("expected infeasibility, got {:?}", other.map(|_| ())),
        }
    }
}
