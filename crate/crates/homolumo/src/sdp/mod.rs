//! Semidefinite programming engine.
//!
//! Problems are stated in linear-matrix-inequality form over a vector of
//! scalar variables `x`:
//!
//! ```text
//!     maximize   c·x
//!     subject to F₀⁽ᵇ⁾ + Σᵢ xᵢ·Fᵢ⁽ᵇ⁾ ⪰ 0    for every block b
//! ```
//!
//! Scalar inequalities and variable boxes are 1×1 blocks, so one solver path
//! covers everything. The solver itself (see [`solve_sdp`]) is a primal-dual
//! path-following interior-point method. Only small dense problems are in
//! scope — tens of variables, block orders below about forty.

mod assemble;
mod solve;

pub use assemble::{
    gap_sdp, inverse_gap_sdp, lambda_max_sdp, omega_sdp, AssembleError, EntryState, GapSdp,
    KPattern, LinearSide, OmegaSdp,
};
pub use solve::solve_sdp;

use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::SymMatrix;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("invalid SDP problem: {0}")]
    Invalid(String),
    #[error("numerical failure in SDP solve: {0}")]
    NumericalFailure(String),
}

/// Handle to a scalar variable of an [`SdpProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(pub(crate) usize);

/// Handle to an LMI block under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockId(usize);

/// One linear matrix inequality `F₀ + Σ xᵢFᵢ ⪰ 0`.
#[derive(Debug, Clone)]
pub struct LmiBlock {
    label: String,
    order: usize,
    constant: SymMatrix,
    /// Per-variable coefficient matrices, sorted by variable index.
    terms: Vec<(usize, SymMatrix)>,
}

impl LmiBlock {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn constant(&self) -> &SymMatrix {
        &self.constant
    }

    pub fn terms(&self) -> &[(usize, SymMatrix)] {
        &self.terms
    }

    /// Evaluates `F₀ + Σ xᵢFᵢ` at the given point.
    pub fn eval(&self, x: &[f64]) -> SymMatrix {
        let mut m = self.constant.clone();
        for (var, coeff) in &self.terms {
            m.add_scaled(x[*var], coeff);
        }
        m
    }
}

/// An SDP in LMI form; build with `add_var` / `block` / scalar helpers.
#[derive(Debug, Clone, Default)]
pub struct SdpProblem {
    names: Vec<String>,
    objective: Vec<f64>,
    blocks: Vec<LmiBlock>,
}

impl SdpProblem {
    pub fn new() -> Self {
        SdpProblem::default()
    }

    /// Declares a scalar variable with the given objective coefficient
    /// (the objective is always maximized).
    pub fn add_var(&mut self, name: impl Into<String>, obj_coeff: f64) -> VarId {
        self.names.push(name.into());
        self.objective.push(obj_coeff);
        VarId(self.names.len() - 1)
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.names[v.0]
    }

    pub fn objective_coeffs(&self) -> &[f64] {
        &self.objective
    }

    pub fn blocks(&self) -> &[LmiBlock] {
        &self.blocks
    }

    /// Opens a new LMI block of the given order.
    pub fn begin_block(&mut self, label: impl Into<String>, order: usize) -> BlockId {
        self.blocks.push(LmiBlock {
            label: label.into(),
            order,
            constant: SymMatrix::zeros(order),
            terms: Vec::new(),
        });
        BlockId(self.blocks.len() - 1)
    }

    /// Adds `v` to the constant part of a block at `(i, j)` (and `(j, i)`).
    pub fn add_const(&mut self, b: BlockId, i: usize, j: usize, v: f64) {
        self.blocks[b.0].constant.add_to(i, j, v);
    }

    /// Adds `v` to the coefficient of `var` in a block at `(i, j)`.
    pub fn add_coeff(&mut self, b: BlockId, var: VarId, i: usize, j: usize, v: f64) {
        let block = &mut self.blocks[b.0];
        let order = block.order;
        match block.terms.iter_mut().find(|(idx, _)| *idx == var.0) {
            Some((_, m)) => m.add_to(i, j, v),
            None => {
                let mut m = SymMatrix::zeros(order);
                m.add_to(i, j, v);
                block.terms.push((var.0, m));
                block.terms.sort_by_key(|(idx, _)| *idx);
            }
        }
    }

    /// Adds the scalar constraint `Σ coeffᵢ·xᵢ ≥ rhs` as a 1×1 block.
    pub fn add_scalar_ge(&mut self, coeffs: &[(VarId, f64)], rhs: f64, label: impl Into<String>) {
        let b = self.begin_block(label, 1);
        self.add_const(b, 0, 0, -rhs);
        for &(v, c) in coeffs {
            self.add_coeff(b, v, 0, 0, c);
        }
    }

    /// Box bound `x ≥ lo`.
    pub fn add_lower_bound(&mut self, v: VarId, lo: f64) {
        let name = format!("{} >= {lo}", self.names[v.0]);
        self.add_scalar_ge(&[(v, 1.0)], lo, name);
    }

    /// Box bound `x ≤ hi`.
    pub fn add_upper_bound(&mut self, v: VarId, hi: f64) {
        let name = format!("{} <= {hi}", self.names[v.0]);
        self.add_scalar_ge(&[(v, -1.0)], -hi, name);
    }

    /// Structural validation: finite data, nonempty blocks, every variable
    /// referenced by at least one constraint or the objective.
    pub fn validate(&self) -> Result<(), SdpError> {
        if self.blocks.is_empty() {
            return Err(SdpError::Invalid("no LMI blocks".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(SdpError::Invalid("non-finite objective coefficient".into()));
        }
        let mut referenced = vec![false; self.n_vars()];
        for (i, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                referenced[i] = true;
            }
        }
        for block in &self.blocks {
            if block.order == 0 {
                return Err(SdpError::Invalid(format!("block '{}' has order 0", block.label)));
            }
            if !block.constant.is_finite() {
                return Err(SdpError::Invalid(format!(
                    "block '{}' has a non-finite constant part",
                    block.label
                )));
            }
            for (var, m) in &block.terms {
                if !m.is_finite() {
                    return Err(SdpError::Invalid(format!(
                        "block '{}' has a non-finite coefficient for {}",
                        block.label, self.names[*var]
                    )));
                }
                referenced[*var] = true;
            }
        }
        if let Some(i) = referenced.iter().position(|r| !r) {
            return Err(SdpError::Invalid(format!("variable '{}' is never referenced", self.names[i])));
        }
        Ok(())
    }

    /// Plain-text dump of the problem for external cross-checking.
    ///
    /// Format: a `vars` section listing `index name objective-coefficient`,
    /// then one `block` section per LMI giving the constant matrix `F0` and
    /// each nonzero coefficient matrix `F <name>` as dense rows, terminated
    /// by `end`.
    pub fn dump(&self) -> String {
        let mut out = String::from("sdp-problem v1\n");
        let _ = writeln!(out, "vars {}", self.n_vars());
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "  {i} {name} obj {}", self.objective[i]);
        }
        for block in &self.blocks {
            let _ = writeln!(out, "block \"{}\" order {}", block.label, block.order);
            let write_matrix = |out: &mut String, m: &SymMatrix| {
                for i in 0..m.order() {
                    out.push(' ');
                    for j in 0..m.order() {
                        let _ = write!(out, " {:.17e}", m.get(i, j));
                    }
                    out.push('\n');
                }
            };
            out.push_str("  F0\n");
            write_matrix(&mut out, &block.constant);
            for (var, m) in &block.terms {
                let _ = writeln!(out, "  F {}", self.names[*var]);
                write_matrix(&mut out, m);
            }
        }
        out.push_str("end\n");
        out
    }
}

/// Termination state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

/// Result of [`solve_sdp`].
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Values of the problem variables, aligned with declaration order.
    pub x: Vec<f64>,
    /// `c·x` at the returned point.
    pub objective: f64,
    /// Final complementarity `⟨X, S⟩` (absolute).
    pub duality_gap: f64,
    /// Largest primal/dual residual at the returned point (absolute).
    pub max_residual: f64,
    pub iterations: usize,
}

/// Solver knobs; the defaults satisfy every caller in this crate.
#[derive(Debug, Clone)]
pub struct SdpSettings {
    pub max_iter: usize,
    /// Relative feasibility/complementarity tolerance for optimality.
    pub tol: f64,
    /// Fallback tolerance: a stalled or iteration-capped final iterate is
    /// still accepted as optimal when every residual is below this. Needed
    /// for instances whose optima all sit on implied equalities (no strictly
    /// feasible point), where the primal residual plateaus near `√ε`.
    pub weak_tol: f64,
    /// Fraction of the step to the positive-semidefinite boundary taken.
    pub step_scale: f64,
}

impl Default for SdpSettings {
    fn default() -> Self {
        SdpSettings { max_iter: 200, tol: 1e-8, weak_tol: 1e-5, step_scale: 0.98 }
    }
}
