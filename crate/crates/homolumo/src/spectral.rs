//! Spectral gaps around zero, block inverses, and congruence checks.
//!
//! For a graph with adjacency matrix C, the quantity of interest is the gap
//! `λ̌⁺ − λ̂⁻` between the smallest positive and the largest negative
//! adjacency eigenvalue — zero by convention when C is singular. Whether C
//! is singular is decided *exactly* (rational determinant); the
//! floating-point spectrum is cross-checked against that verdict and any
//! disagreement is reported as a fault rather than silently resolved.
//!
//! [`block_inverse`] inverts a bridged matrix `[[A, K], [Kᵀ, B]]` through
//! its Schur complement `S = A − KB⁻¹Kᵀ`: the bridged matrix is invertible
//! iff S is, and then
//!
//! ```text
//!   C⁻¹ = Qᵀ diag(S⁻¹, B⁻¹) Q,   Q = [[I, −KB⁻¹], [0, I]],   Z = Q⁻¹.
//! ```
//!
//! All of that is computed in exact rational arithmetic and only converted
//! to floating point at the edges. [`congruence_lmi_check`] tests the two
//! gap inequalities `I − μC⁻¹ ⪰ 0`, `I + ηC⁻¹ ⪰ 0` both directly and in
//! the congruence-transformed form `ZᵀZ ∓ (μ or −η)·diag(S⁻¹, B⁻¹) ⪰ 0`;
//! the two must agree away from the semidefinite boundary.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{BipartiteBridge, Graph, GraphError};
use crate::linalg::{
    is_invertible, min_eigenvalue, rational_inverse, schur_complement_exact, symmetric_eigen,
    LinalgError, Mat, RationalInverse, RationalMatrix, SymMatrix,
};
use crate::sdp::{inverse_gap_sdp, solve_sdp, SdpError, SdpSettings, SdpStatus};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("{0} is singular")]
    NotInvertible(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("SDP solver failed: {0}")]
    Solver(String),
    #[error("internal inconsistency: {0}")]
    Fault(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
}

/// Result of a gap computation.
#[derive(Debug, Clone, Serialize)]
pub struct GapResult {
    /// Smallest positive adjacency eigenvalue (0 if none).
    pub lambda_plus: f64,
    /// Largest negative adjacency eigenvalue (0 if none).
    pub lambda_minus: f64,
    /// `lambda_plus − lambda_minus` when the adjacency matrix is
    /// invertible, 0 otherwise.
    pub gap: f64,
    pub invertible: bool,
    /// Full adjacency spectrum, descending.
    pub spectrum: Vec<f64>,
}

fn classify(values: &[f64], invertible: bool) -> GapResult {
    let max_abs = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let thresh = 1e-9 * (1.0 + max_abs);
    let lambda_plus = values.iter().copied().filter(|&v| v > thresh).fold(f64::INFINITY, f64::min);
    let lambda_minus =
        values.iter().copied().filter(|&v| v < -thresh).fold(f64::NEG_INFINITY, f64::max);
    let lambda_plus = if lambda_plus.is_finite() { lambda_plus } else { 0.0 };
    let lambda_minus = if lambda_minus.is_finite() { lambda_minus } else { 0.0 };
    let gap = if invertible { lambda_plus - lambda_minus } else { 0.0 };
    GapResult { lambda_plus, lambda_minus, gap, invertible, spectrum: values.to_vec() }
}

/// Gap between the eigenvalues adjacent to zero, via the eigensolver, with
/// the singularity verdict taken from the exact determinant.
pub fn homo_lumo_gap(g: &Graph) -> Result<GapResult, SpectralError> {
    if g.n() == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let invertible = g.is_invertible()?;
    let spectrum = symmetric_eigen(&g.adjacency(), false)?;
    let values = spectrum.values;
    let max_abs = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let thresh = 1e-9 * (1.0 + max_abs);
    let min_abs = values.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    let float_nonsingular = min_abs > thresh;
    if float_nonsingular != invertible {
        return Err(SpectralError::Fault(format!(
            "exact determinant says invertible = {invertible}, but the smallest \
             eigenvalue magnitude is {min_abs:.3e} against threshold {thresh:.3e}"
        )));
    }
    Ok(classify(&values, invertible))
}

/// Same gap, but computed through the inverse: `max μ + η` subject to
/// `I − μC⁻¹ ⪰ 0`, `I + ηC⁻¹ ⪰ 0`. Errors if the adjacency matrix is
/// singular (the inverse formulation does not exist there).
pub fn gap_via_inverse_sdp(g: &Graph) -> Result<GapResult, SpectralError> {
    if g.n() == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let inv = match rational_inverse(&g.adjacency_int())? {
        RationalInverse::Invertible(m) => m,
        RationalInverse::Singular => {
            return Err(SpectralError::NotInvertible("graph adjacency matrix".into()))
        }
    };
    let (problem, mu, eta) = inverse_gap_sdp(&inv.to_sym());
    let sol = solve_sdp(&problem, &SdpSettings::default())?;
    if sol.status != SdpStatus::Optimal {
        return Err(SpectralError::Solver(format!(
            "gap program ended with status {:?} after {} iterations",
            sol.status, sol.iterations
        )));
    }
    let spectrum = symmetric_eigen(&g.adjacency(), false)?;
    Ok(GapResult {
        lambda_plus: sol.x[mu.0],
        lambda_minus: -sol.x[eta.0],
        gap: sol.objective,
        invertible: true,
        spectrum: spectrum.values,
    })
}

/// Block inverse of a bridged adjacency matrix.
#[derive(Debug, Clone)]
pub struct BlockInverse {
    /// Inverse of the full bridged matrix, order n+m.
    pub c_inv: SymMatrix,
    /// Inverse of the Schur complement `S = A − KB⁻¹Kᵀ`, order n.
    pub s_inv: SymMatrix,
    /// Inverse of the second adjacency matrix, order m.
    pub b_inv: SymMatrix,
    /// Congruence factor `Q = [[I, −KB⁻¹], [0, I]]` with `C⁻¹ = Qᵀ·diag(S⁻¹, B⁻¹)·Q`.
    pub q: Mat,
    /// `Z = Q⁻¹ = [[I, KB⁻¹], [0, I]]`.
    pub z: Mat,
}

/// Either the block inverse, or the verdict that the bridged matrix is
/// singular (exactly: its Schur complement has zero determinant).
#[derive(Debug, Clone)]
pub enum BlockInverseOutcome {
    Invertible(Box<BlockInverse>),
    Singular,
}

/// Inverts `[[A, K], [Kᵀ, B]]` through the Schur complement, in exact
/// arithmetic. Errors if either constituent graph is singular or the bridge
/// dimensions do not match; returns `Singular` when the bridged matrix
/// itself has no inverse.
pub fn block_inverse(
    ga: &Graph,
    gb: &Graph,
    bridge: &BipartiteBridge,
) -> Result<BlockInverseOutcome, SpectralError> {
    let n = ga.n();
    let m = gb.n();
    let k = bridge.k();
    if k.rows() != n || k.cols() != m {
        return Err(SpectralError::Dimension(format!(
            "bridge is {}x{}, graphs need {}x{}",
            k.rows(),
            k.cols(),
            n,
            m
        )));
    }
    let a_int = ga.adjacency_int();
    let b_int = gb.adjacency_int();
    if !is_invertible(&a_int)? {
        return Err(SpectralError::NotInvertible("first graph".into()));
    }
    let b_inv = match rational_inverse(&b_int)? {
        RationalInverse::Invertible(v) => v,
        RationalInverse::Singular => {
            return Err(SpectralError::NotInvertible("second graph".into()))
        }
    };
    let s = schur_complement_exact(&a_int, &b_inv, k);
    let s_inv = match s.inverse()? {
        RationalInverse::Invertible(v) => v,
        RationalInverse::Singular => return Ok(BlockInverseOutcome::Singular),
    };

    // K·B⁻¹ appears in every block of the formula.
    let kbinv = b_inv.mul_int_left(k);

    // C⁻¹ = [[S⁻¹, −S⁻¹·KB⁻¹], [(−S⁻¹·KB⁻¹)ᵀ, B⁻¹ + (KB⁻¹)ᵀ·S⁻¹·KB⁻¹]]
    let top_right = s_inv.mul(&kbinv);
    let corr = kbinv.transpose().mul(&s_inv).mul(&kbinv);
    let mut c_inv = RationalMatrix::zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            c_inv.set(i, j, s_inv.get(i, j).clone());
        }
        for j in 0..m {
            let v = -top_right.get(i, j).clone();
            c_inv.set(i, n + j, v.clone());
            c_inv.set(n + j, i, v);
        }
    }
    for i in 0..m {
        for j in 0..m {
            c_inv.set(n + i, n + j, b_inv.get(i, j) + corr.get(i, j));
        }
    }

    let kb_f = kbinv.to_mat();
    let q = Mat::block2x2(&Mat::identity(n), &kb_f.scale(-1.0), &Mat::zeros(m, n), &Mat::identity(m));
    let z = Mat::block2x2(&Mat::identity(n), &kb_f, &Mat::zeros(m, n), &Mat::identity(m));

    Ok(BlockInverseOutcome::Invertible(Box::new(BlockInverse {
        c_inv: c_inv.to_sym(),
        s_inv: s_inv.to_sym(),
        b_inv: b_inv.to_sym(),
        q,
        z,
    })))
}

/// Evaluates the two gap inequalities at `(μ, η)` both directly on `C⁻¹`
/// and after the congruence `Z`, returning `(upper ok, lower ok)`.
///
/// The two forms must agree in sign; if they disagree with both margins
/// clearly away from the semidefinite boundary, that is an internal fault.
/// Within boundary resolution the direct verdict wins.
pub fn congruence_lmi_check(
    bi: &BlockInverse,
    mu: f64,
    eta: f64,
) -> Result<(bool, bool), SpectralError> {
    if mu < 0.0 || eta < 0.0 {
        return Err(SpectralError::Dimension(format!(
            "multipliers must be nonnegative, got mu = {mu}, eta = {eta}"
        )));
    }
    let nm = bi.c_inv.order();
    let n = bi.s_inv.order();
    let m = bi.b_inv.order();

    let ztz = SymMatrix::from_mat(&bi.z.transpose().matmul(&bi.z));
    let diag = SymMatrix::from_fn(nm, |i, j| {
        if i < n && j < n {
            bi.s_inv.get(i, j)
        } else if i >= n && j >= n {
            bi.b_inv.get(i - n, j - n)
        } else {
            0.0
        }
    });
    debug_assert_eq!(nm, n + m);

    let mut verdict = [false; 2];
    for (idx, sign_mul) in [(0, mu), (1, -eta)] {
        // Direct: I − s·C⁻¹ with s = μ or −η.
        let mut direct = SymMatrix::identity(nm);
        direct.add_scaled(-sign_mul, &bi.c_inv);
        // Transformed: ZᵀZ − s·diag(S⁻¹, B⁻¹).
        let mut trans = ztz.clone();
        trans.add_scaled(-sign_mul, &diag);

        let d_min = min_eigenvalue(&direct)?;
        let t_min = min_eigenvalue(&trans)?;
        let d_tol = 1e-8 * (1.0 + direct.norm_inf());
        let t_tol = 1e-8 * (1.0 + trans.norm_inf());
        let d_ok = d_min >= -d_tol;
        let t_ok = t_min >= -t_tol;
        if d_ok != t_ok {
            let near_boundary = d_min.abs() <= 10.0 * d_tol || t_min.abs() <= 10.0 * t_tol;
            if !near_boundary {
                return Err(SpectralError::Fault(format!(
                    "direct and congruence-transformed semidefiniteness verdicts disagree \
                     (direct min eig {d_min:.3e}, transformed min eig {t_min:.3e})"
                )));
            }
        }
        verdict[idx] = d_ok;
    }
    Ok((verdict[0], verdict[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin, graph_from_edges};
    use crate::linalg::IntMatrix;

    fn bridged_double_anchor() -> (Graph, Graph, BipartiteBridge) {
        // Two single edges; both vertices of the first tied to vertex 1 of
        // the second.
        let ga = builtin("K2").unwrap();
        let gb = builtin("K2").unwrap();
        let k = IntMatrix::from_fn(2, 2, |_, j| if j == 0 { 1 } else { 0 });
        let bridge = BipartiteBridge::new(k, vec![1]).unwrap();
        (ga, gb, bridge)
    }

    /// The bridged graph of `bridged_double_anchor`, built directly.
    fn bridged_double_anchor_graph() -> Graph {
        graph_from_edges(4, &[(1, 2), (3, 4), (1, 3), (2, 3)], None).unwrap()
    }

    #[test]
    fn single_edge_gap_is_two() {
        let g = builtin("K2").unwrap();
        let r = homo_lumo_gap(&g).unwrap();
        assert!(r.invertible);
        assert!((r.gap - 2.0).abs() < 1e-12);
        assert!((r.lambda_plus - 1.0).abs() < 1e-12);
        assert!((r.lambda_minus + 1.0).abs() < 1e-12);
    }

    #[test]
    fn fulvene_gap_matches_published_value() {
        let g = builtin("F0").unwrap();
        let r = homo_lumo_gap(&g).unwrap();
        assert!(r.invertible);
        assert!((r.gap - 0.872134).abs() < 1e-5, "gap = {}", r.gap);
        // Closed forms: λ̌⁺ = (√5 − 1)/2, λ̂⁻ is the middle root of
        // x³ − 4x − 1.
        let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
        assert!((r.lambda_plus - golden).abs() < 1e-10);
        let lm = r.lambda_minus;
        assert!((lm * lm * lm - 4.0 * lm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn odd_path_is_singular_with_zero_gap() {
        let g = builtin("P(3)").unwrap();
        let r = homo_lumo_gap(&g).unwrap();
        assert!(!r.invertible);
        assert_eq!(r.gap, 0.0);
        assert!((r.lambda_plus - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((r.lambda_minus + 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn edgeless_graph_is_singular() {
        let g = graph_from_edges(3, &[], None).unwrap();
        let r = homo_lumo_gap(&g).unwrap();
        assert!(!r.invertible);
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.lambda_plus, 0.0);
        assert_eq!(r.lambda_minus, 0.0);
    }

    #[test]
    fn sdp_route_matches_eigen_route() {
        for name in ["K2", "P(4)", "F0"] {
            let g = builtin(name).unwrap();
            let a = homo_lumo_gap(&g).unwrap();
            let b = gap_via_inverse_sdp(&g).unwrap();
            assert!((a.gap - b.gap).abs() < 1e-6, "{name}: {} vs {}", a.gap, b.gap);
            assert!((a.lambda_plus - b.lambda_plus).abs() < 1e-6);
            assert!((a.lambda_minus - b.lambda_minus).abs() < 1e-6);
        }
    }

    #[test]
    fn sdp_route_rejects_singular_graphs() {
        let g = builtin("P(3)").unwrap();
        assert!(matches!(gap_via_inverse_sdp(&g), Err(SpectralError::NotInvertible(_))));
    }

    #[test]
    fn bridged_example_spectrum() {
        let g = bridged_double_anchor_graph();
        let r = homo_lumo_gap(&g).unwrap();
        let expected = [2.170086, 0.311108, -1.0, -1.481194];
        for (got, want) in r.spectrum.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-5, "{got} vs {want}");
        }
        assert!((r.gap - 1.311108).abs() < 1e-5);
    }

    #[test]
    fn block_inverse_reconstructs_the_inverse() {
        let (ga, gb, bridge) = bridged_double_anchor();
        let bi = match block_inverse(&ga, &gb, &bridge).unwrap() {
            BlockInverseOutcome::Invertible(bi) => bi,
            BlockInverseOutcome::Singular => panic!("expected invertible"),
        };
        // C · C⁻¹ = I.
        let c = bridged_double_anchor_graph().adjacency().to_mat();
        let prod = c.matmul(&bi.c_inv.to_mat());
        assert!(prod.max_abs_diff(&Mat::identity(4)) < 1e-9);
        // Q·Z = I.
        assert!(bi.q.matmul(&bi.z).max_abs_diff(&Mat::identity(4)) < 1e-10);
        // C⁻¹ = Qᵀ·diag(S⁻¹, B⁻¹)·Q.
        let diag = Mat::block2x2(
            &bi.s_inv.to_mat(),
            &Mat::zeros(2, 2),
            &Mat::zeros(2, 2),
            &bi.b_inv.to_mat(),
        );
        let back = bi.q.transpose().matmul(&diag).matmul(&bi.q);
        assert!(back.max_abs_diff(&bi.c_inv.to_mat()) < 1e-10);
    }

    #[test]
    fn block_inverse_detects_singular_bridged_matrix() {
        // Bridging two single edges by the identity pattern yields the
        // 4-cycle, whose adjacency matrix is singular.
        let ga = builtin("K2").unwrap();
        let gb = builtin("K2").unwrap();
        let k = IntMatrix::identity(2);
        let bridge = BipartiteBridge::new(k, vec![1, 2]).unwrap();
        match block_inverse(&ga, &gb, &bridge).unwrap() {
            BlockInverseOutcome::Singular => {}
            BlockInverseOutcome::Invertible(_) => panic!("expected singular"),
        }
    }

    #[test]
    fn block_inverse_rejects_singular_constituents() {
        let ga = builtin("P(3)").unwrap();
        let gb = builtin("K2").unwrap();
        let k = IntMatrix::zeros(3, 2);
        let bridge = BipartiteBridge::new(k, vec![1]).unwrap();
        assert!(matches!(
            block_inverse(&ga, &gb, &bridge),
            Err(SpectralError::NotInvertible(_))
        ));
    }

    #[test]
    fn congruence_check_agrees_across_the_threshold() {
        let (ga, gb, bridge) = bridged_double_anchor();
        let bi = match block_inverse(&ga, &gb, &bridge).unwrap() {
            BlockInverseOutcome::Invertible(bi) => bi,
            BlockInverseOutcome::Singular => panic!("expected invertible"),
        };
        // λ̌⁺ ≈ 0.311108, λ̂⁻ = −1: feasible strictly inside.
        assert_eq!(congruence_lmi_check(&bi, 0.0, 0.0).unwrap(), (true, true));
        assert_eq!(congruence_lmi_check(&bi, 0.3, 0.9).unwrap(), (true, true));
        // Above the eigenvalue thresholds both sides must flip.
        assert_eq!(congruence_lmi_check(&bi, 0.33, 0.9).unwrap(), (false, true));
        assert_eq!(congruence_lmi_check(&bi, 0.3, 1.1).unwrap(), (true, false));
        // At the threshold itself the check stays tolerant.
        let (up, _lo) = congruence_lmi_check(&bi, 0.311108, 1.0).unwrap();
        let _ = up;
    }

    #[test]
    fn congruence_check_rejects_negative_multipliers() {
        let (ga, gb, bridge) = bridged_double_anchor();
        let bi = match block_inverse(&ga, &gb, &bridge).unwrap() {
            BlockInverseOutcome::Invertible(bi) => bi,
            BlockInverseOutcome::Singular => panic!("expected invertible"),
        };
        assert!(congruence_lmi_check(&bi, -0.1, 0.0).is_err());
    }
}
