//! Symmetric eigensolver: cyclic Jacobi rotations.
//!
//! Jacobi is quadratically convergent once the off-diagonal mass is small and
//! is bulletproof at the orders used here (≤ 64). Sweeps run over all `(p, q)`
//! pairs in row-cyclic order until the off-diagonal Frobenius norm drops below
//! a fixed threshold; eigenvalues come out sorted in descending order with
//! matching orthonormal eigenvectors when requested.

use super::mat::{Mat, SymMatrix};
use super::LinalgError;

/// Off-diagonal Frobenius-norm threshold (relative to the input scale) at
/// which the iteration is declared converged.
pub const JACOBI_OFF_NORM_TOL: f64 = 1e-12;

/// Hard cap on the number of cyclic sweeps; reaching it is treated as a
/// convergence failure rather than returning a half-rotated matrix silently.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order, with eigenvectors (as columns of an
/// orthogonal matrix, aligned with `values`) when they were requested.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<Mat>,
}

impl Spectrum {
    /// Largest eigenvalue; `None` for an empty matrix.
    pub fn max(&self) -> Option<f64> {
        self.values.first().copied()
    }

    /// Smallest eigenvalue; `None` for an empty matrix.
    pub fn min(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

fn off_diagonal_norm(a: &Mat) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j) * a.get(i, j);
            }
        }
    }
    sum.sqrt()
}

/// Computes the spectrum of a symmetric matrix by cyclic Jacobi iteration.
pub fn symmetric_eigen(m: &SymMatrix, want_vectors: bool) -> Result<Spectrum, LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = m.order();
    if n == 0 {
        return Ok(Spectrum { values: vec![], vectors: want_vectors.then(|| Mat::zeros(0, 0)) });
    }

    let mut a = m.to_mat();
    let mut v = want_vectors.then(|| Mat::identity(n));
    let scale = 1.0 + m.norm_inf();
    let tol = JACOBI_OFF_NORM_TOL * scale;

    let mut converged = off_diagonal_norm(&a) <= tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= f64::EPSILON * scale * 1e-4 {
                    continue;
                }
                // Classical two-sided rotation zeroing a[p][q].
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= tol;
    }

    // Sort descending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).partial_cmp(&a.get(i, i)).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = v.map(|v| Mat::from_fn(n, n, |i, j| v.get(i, order[j])));

    Ok(Spectrum { values, vectors })
}

/// Eigenvalues only, descending.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(symmetric_eigen(m, false)?.values)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64, LinalgError> {
    symmetric_eigen(m, false)?
        .min()
        .ok_or_else(|| LinalgError::DimensionMismatch("empty matrix has no eigenvalues".into()))
}

/// Whether `M ⪰ −tol·I`, i.e. positive semidefinite up to `tol`.
pub fn psd_check(m: &SymMatrix, tol: f64) -> Result<bool, LinalgError> {
    Ok(min_eigenvalue(m)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &SymMatrix, sp: &Spectrum) -> f64 {
        let v = sp.vectors.as_ref().unwrap();
        let mv = m.to_mat().matmul(v);
        let n = m.order();
        let vl = Mat::from_fn(n, n, |i, j| v.get(i, j) * sp.values[j]);
        mv.max_abs_diff(&vl)
    }

    #[test]
    fn two_vertex_adjacency_eigen() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, 1.0);
        let sp = symmetric_eigen(&m, true).unwrap();
        assert!((sp.values[0] - 1.0).abs() < 1e-12);
        assert!((sp.values[1] + 1.0).abs() < 1e-12);
        assert!(residual(&m, &sp) < 1e-10);
    }

    #[test]
    fn path4_matches_closed_form() {
        // adjacency eigenvalues of the 4-path: 2·cos(kπ/5), k = 1..4
        let mut m = SymMatrix::zeros(4);
        for i in 0..3 {
            m.set(i, i + 1, 1.0);
        }
        let sp = symmetric_eigen(&m, true).unwrap();
        let expect: Vec<f64> =
            (1..=4).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / 5.0).cos()).collect();
        for (got, want) in sp.values.iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
        assert!(residual(&m, &sp) < 1e-10);
    }

    #[test]
    fn eigenvalues_sorted_descending_and_trace_preserved() {
        let m = SymMatrix::from_fn(6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let sp = symmetric_eigen(&m, true).unwrap();
        for w in sp.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let trace: f64 = (0..6).map(|i| m.get(i, i)).sum();
        let sum: f64 = sp.values.iter().sum();
        assert!((trace - sum).abs() < 1e-9);
        assert!(residual(&m, &sp) < 1e-9);
    }

    #[test]
    fn diagonal_matrix_needs_no_sweeps() {
        let m = SymMatrix::from_fn(3, |i, j| if i == j { i as f64 } else { 0.0 });
        let sp = symmetric_eigen(&m, false).unwrap();
        assert_eq!(sp.values, vec![2.0, 1.0, 0.0]);
    }

    #[test]
    fn psd_check_on_shifted_matrix() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, 1.0);
        assert!(!psd_check(&m, 1e-9).unwrap());
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0);
        // eigenvalues {2, 0}
        assert!(psd_check(&m, 1e-9).unwrap());
        assert!((min_eigenvalue(&m).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_input() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 0, f64::NAN);
        assert!(matches!(symmetric_eigen(&m, false), Err(LinalgError::NonFinite)));
    }
}
