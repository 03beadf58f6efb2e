//! Optimal-bridge search and the bound chain around it.
//!
//! Given a validated [`BridgeProblem`], this module finds the 0/1 bridge
//! pattern maximizing the spectral gap of the combined graph — exactly, by
//! branch-and-bound over a semidefinite relaxation ([`exact_opt_gap`]) or
//! by exhaustive enumeration ([`enumerate_opt_gap`], the independent oracle
//! for small instances) — and computes the bounds that sandwich the
//! optimum:
//!
//! ```text
//! lower_sdp ≤ lower_sir ≤ opt ≤ upper_sdp ≤ gap(first graph)
//! ```
//!
//! The upper bound is the continuous relaxation of the search problem
//! (entries of K relaxed to `[0, 1]`). The lower bounds come from a
//! closed-form eigenvalue estimate ([`gamma_star`]) driven by the coupling
//! norm `ω = λ_max(B⁻¹KᵀKB⁻¹)`: minimizing ω over actual 0/1 patterns
//! gives one bound, minimizing over the box relaxation gives a larger one
//! (the bound is decreasing in ω). [`bounds_report`] assembles the whole
//! chain and verifies the ordering.

mod search;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::bridging::{BridgeProblem, BridgingError};
use crate::graph::BipartiteBridge;
use crate::linalg::{eigenvalues, LinalgError};
use crate::sdp::{AssembleError, SdpError};
use crate::spectral::{self, SpectralError};

use search::{GapObjective, Incumbent, Instance};

pub use search::ENUMERATION_BIT_LIMIT;

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("enumeration budget exceeded: {bits} free entries, limit {ENUMERATION_BIT_LIMIT}")]
    BudgetExceeded { bits: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("internal fault: {0}")]
    Fault(String),
}

impl From<LinalgError> for OptimizerError {
    fn from(e: LinalgError) -> Self {
        OptimizerError::Fault(e.to_string())
    }
}

impl From<SdpError> for OptimizerError {
    fn from(e: SdpError) -> Self {
        OptimizerError::Solver(e.to_string())
    }
}

impl From<AssembleError> for OptimizerError {
    fn from(e: AssembleError) -> Self {
        match e {
            AssembleError::Infeasible(s) => OptimizerError::Infeasible(s),
            AssembleError::Dimension(s) => OptimizerError::Fault(s),
        }
    }
}

impl From<SpectralError> for OptimizerError {
    fn from(e: SpectralError) -> Self {
        OptimizerError::Fault(e.to_string())
    }
}

impl From<BridgingError> for OptimizerError {
    fn from(e: BridgingError) -> Self {
        OptimizerError::Fault(e.to_string())
    }
}

/// Which feasible set the coupling-norm minimization ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaMode {
    /// Actual 0/1 patterns (exact search).
    Binary,
    /// Box relaxation `0 ≤ K ≤ 1` with at least one unit of coupling.
    Relaxed,
}

/// An optimal bridge, certified against the exact determinant and the
/// problem constraints.
#[derive(Debug, Clone)]
pub struct BridgeSolution {
    pub bridge: BipartiteBridge,
    /// Spectral gap of the bridged graph.
    pub gap: f64,
    /// Smallest positive eigenvalue of the bridged adjacency matrix.
    pub mu: f64,
    /// Negated largest negative eigenvalue; `gap = mu + eta`.
    pub eta: f64,
    /// Full spectrum of the bridged adjacency matrix, descending.
    pub spectrum: Vec<f64>,
    /// Branch-and-bound nodes processed, or feasible patterns scanned.
    pub nodes_explored: u64,
    /// Wall-clock seconds spent in the search.
    pub wall_time: f64,
}

/// Closed-form lower bound on the optimal gap, with the quantities that
/// produced it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LowerBound {
    pub value: f64,
    /// The coupling norm the bound was evaluated at.
    pub omega: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

/// The full bound chain around the optimum, plus the spectral data behind
/// the closed-form bounds and per-stage timings in seconds.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    /// Lower bound at the exact binary coupling-norm minimum.
    pub lower_sdp: f64,
    /// Lower bound at the box-relaxed coupling-norm minimum.
    pub lower_sir: f64,
    /// Exact optimum, when the search was run.
    pub opt: Option<f64>,
    /// Equals `opt` when computed: the integral search is exact.
    pub upper_sir: Option<f64>,
    /// Continuous relaxation of the search problem.
    pub upper_sdp: f64,
    /// Gap of the first graph alone (the ceiling of the chain).
    pub gap_of_ga: f64,
    pub omega_star_binary: f64,
    pub omega_star_relaxed: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub timings: BTreeMap<String, f64>,
}

/// A bounds report together with the optimal bridge when one was computed.
#[derive(Debug, Clone)]
pub struct BoundsOutcome {
    pub report: BoundsReport,
    pub solution: Option<BridgeSolution>,
}

/// The closed-form eigenvalue bound kernel:
/// `γ*(α, β, ω) = [α(ω+1) + β + √((α(ω+1)+β)² − 4αβ)] / 2`,
/// the largest γ with `(γ−α)(γ−β)/(αγ)` an eigenvalue of `DᵀD` when
/// `ω = λ_max(DᵀD)`. Increasing in ω, so a smaller coupling norm gives a
/// larger `1/γ*` contribution to the gap lower bound.
pub fn gamma_star(alpha: f64, beta: f64, omega: f64) -> Result<f64, OptimizerError> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(OptimizerError::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if !beta.is_finite() || beta <= 0.0 {
        return Err(OptimizerError::Domain(format!("beta must be positive, got {beta}")));
    }
    if !omega.is_finite() || omega < -1e-12 {
        return Err(OptimizerError::Domain(format!("omega must be nonnegative, got {omega}")));
    }
    let omega = omega.max(0.0);
    let s = alpha * (omega + 1.0) + beta;
    // s ≥ α + β makes the discriminant analytically nonnegative; the clamp
    // only absorbs rounding.
    let disc = (s * s - 4.0 * alpha * beta).max(0.0);
    Ok((s + disc.sqrt()) / 2.0)
}

/// Globally optimal 0/1 bridge by best-bound-first branch-and-bound with
/// semidefinite node relaxations.
pub fn exact_opt_gap(problem: &BridgeProblem) -> Result<BridgeSolution, OptimizerError> {
    let start = Instant::now();
    let inst = Instance::new(problem)?;
    let (incumbent, nodes) = search::branch_and_bound(&inst, &GapObjective)?;
    finish_solution(problem, &inst, &incumbent, nodes, start)
}

/// Globally optimal 0/1 bridge by exhaustive enumeration — the independent
/// oracle. Refuses instances with more than [`ENUMERATION_BIT_LIMIT`] free
/// entries.
pub fn enumerate_opt_gap(problem: &BridgeProblem) -> Result<BridgeSolution, OptimizerError> {
    let start = Instant::now();
    let inst = Instance::new(problem)?;
    let (incumbent, feasible) = search::enumerate(&inst, &GapObjective)?;
    finish_solution(problem, &inst, &incumbent, feasible, start)
}

fn finish_solution(
    problem: &BridgeProblem,
    inst: &Instance,
    incumbent: &Incumbent,
    nodes: u64,
    start: Instant,
) -> Result<BridgeSolution, OptimizerError> {
    let (bridge, gap, mu, eta, spectrum) = search::certify(problem, inst, incumbent)?;
    Ok(BridgeSolution {
        bridge,
        gap,
        mu,
        eta,
        spectrum,
        nodes_explored: nodes,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Optimal objective of the continuous relaxation (`0 ≤ K ≤ 1` boxes).
pub fn upper_bound_sdp(problem: &BridgeProblem) -> Result<f64, OptimizerError> {
    let inst = Instance::new(problem)?;
    search::relaxed_gap(&inst)
}

/// Largest eigenvalues of `±M` for a symmetric matrix given in packed form.
fn signed_extremes(mat: &crate::linalg::SymMatrix) -> Result<(f64, f64), OptimizerError> {
    let values = eigenvalues(mat)?;
    let hi = *values.first().ok_or_else(|| OptimizerError::Fault("empty spectrum".into()))?;
    let lo = *values.last().unwrap();
    Ok((hi, -lo))
}

fn lower_bound_on(inst: &Instance, mode: OmegaMode) -> Result<LowerBound, OptimizerError> {
    let (alpha_plus, alpha_minus) = signed_extremes(&inst.a_hat)?;
    let (beta_plus, beta_minus) = signed_extremes(&inst.b_hat)?;
    for (name, v) in [
        ("alpha_plus", alpha_plus),
        ("alpha_minus", alpha_minus),
        ("beta_plus", beta_plus),
        ("beta_minus", beta_minus),
    ] {
        if v <= 0.0 {
            // A traceless invertible adjacency matrix has eigenvalues of
            // both signs, and so does its inverse.
            return Err(OptimizerError::Fault(format!("{name} = {v} is not positive")));
        }
    }
    let omega = match mode {
        OmegaMode::Binary => search::omega_binary(inst)?,
        OmegaMode::Relaxed => search::omega_relaxed(inst)?,
    };
    let value = 1.0 / gamma_star(alpha_plus, beta_plus, omega)?
        + 1.0 / gamma_star(alpha_minus, beta_minus, omega)?;
    Ok(LowerBound { value, omega, alpha_plus, alpha_minus, beta_plus, beta_minus })
}

/// Closed-form lower bound on the optimal gap, driven by the minimum
/// coupling norm over the chosen feasible set.
pub fn lower_bound(problem: &BridgeProblem, mode: OmegaMode) -> Result<LowerBound, OptimizerError> {
    let inst = Instance::new(problem)?;
    lower_bound_on(&inst, mode)
}

/// Computes the whole bound chain (and, when `include_exact`, the optimum
/// itself), verifying the sandwich ordering within `1e-6`.
///
/// The exact search picks its strategy by instance size: branch-and-bound
/// for up to 16 free entries, enumeration up to the enumeration budget
/// (where scanning is cheaper than solving relaxations), branch-and-bound
/// again beyond it.
pub fn bounds_report(
    problem: &BridgeProblem,
    include_exact: bool,
) -> Result<BoundsOutcome, OptimizerError> {
    let inst = Instance::new(problem)?;
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let gap_of_ga = spectral::homo_lumo_gap(problem.ga())?.gap;
    timings.insert("gap_of_ga".to_string(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let upper_sdp = search::relaxed_gap(&inst)?;
    timings.insert("upper_sdp".to_string(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let binary = lower_bound_on(&inst, OmegaMode::Binary)?;
    timings.insert("lower_sdp".to_string(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let relaxed = lower_bound_on(&inst, OmegaMode::Relaxed)?;
    timings.insert("lower_sir".to_string(), t.elapsed().as_secs_f64());

    let solution = if include_exact {
        let t = Instant::now();
        let bits = inst.bits();
        let start = Instant::now();
        let (incumbent, nodes) = if bits <= 16 || bits > ENUMERATION_BIT_LIMIT {
            search::branch_and_bound(&inst, &GapObjective)?
        } else {
            search::enumerate(&inst, &GapObjective)?
        };
        let sol = finish_solution(problem, &inst, &incumbent, nodes, start)?;
        timings.insert("opt".to_string(), t.elapsed().as_secs_f64());
        Some(sol)
    } else {
        None
    };

    let opt = solution.as_ref().map(|s| s.gap);
    let report = BoundsReport {
        lower_sdp: binary.value,
        lower_sir: relaxed.value,
        opt,
        upper_sir: opt,
        upper_sdp,
        gap_of_ga,
        omega_star_binary: binary.omega,
        omega_star_relaxed: relaxed.omega,
        alpha_plus: binary.alpha_plus,
        alpha_minus: binary.alpha_minus,
        beta_plus: binary.beta_plus,
        beta_minus: binary.beta_minus,
        timings,
    };

    const SLACK: f64 = 1e-6;
    let mut chain: Vec<(&str, f64)> = vec![
        ("lower_sdp", report.lower_sdp),
        ("lower_sir", report.lower_sir),
    ];
    if let Some(v) = report.opt {
        chain.push(("opt", v));
    }
    chain.push(("upper_sdp", report.upper_sdp));
    chain.push(("gap_of_ga", report.gap_of_ga));
    for w in chain.windows(2) {
        if w[0].1 > w[1].1 + SLACK {
            return Err(OptimizerError::Fault(format!(
                "bound ordering violated: {} = {} exceeds {} = {}",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }

    Ok(BoundsOutcome { report, solution })
}
