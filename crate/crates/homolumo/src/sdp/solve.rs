//! Primal-dual interior-point solver for small dense LMI problems.
//!
//! The problem `maximize c·y  s.t.  F(y) = F₀ + Σᵢ yᵢFᵢ ⪰ 0` is solved
//! together with its conic dual `minimize F₀•X  s.t.  Fᵢ•X = −cᵢ, X ⪰ 0`.
//! Each iteration takes one Mehrotra predictor-corrector step of the
//! linearized central-path system `XS = νI` (the direction is the
//! X-linearization with a symmetrizing projection, so the Schur complement
//! matrix `M̃ᵢⱼ = Fᵢ • ½(X Fⱼ S⁻¹ + S⁻¹ Fⱼ X)` is symmetric positive
//! definite and factors by Cholesky). Steps are clipped to a fixed fraction
//! of the distance to the semidefinite boundary. The method starts from
//! `X = S = ξI`, `y = 0` with ξ scaled to the data, so it does not require
//! a feasible initial point.
//!
//! Everything is deterministic: no randomization, fixed iteration order,
//! fixed tie rules. Two solves of the same problem return bitwise-identical
//! results.

use crate::linalg::{symmetric_eigen, Mat, SymMatrix};

use super::{SdpError, SdpProblem, SdpSettings, SdpSolution, SdpStatus};

struct Block {
    f0: Mat,
    /// `(variable index, coefficient matrix)` sorted by variable index.
    terms: Vec<(usize, Mat)>,
}

impl Block {
    fn eval(&self, y: &[f64]) -> Mat {
        let mut m = self.f0.clone();
        for (v, f) in &self.terms {
            m.add_scaled(y[*v], f);
        }
        m
    }
}

/// `a + s·b` as a fresh matrix.
fn add_scaled_new(a: &Mat, s: f64, b: &Mat) -> Mat {
    let mut m = a.clone();
    m.add_scaled(s, b);
    m
}

/// Solves the problem; see the module docs for the method.
///
/// Returns `Err` only for structurally invalid input. Lack of convergence
/// (iteration cap, stall, numerically indefinite iterates) is reported
/// through [`SdpStatus`], not as an error, so callers can fall back.
pub fn solve_sdp(problem: &SdpProblem, settings: &SdpSettings) -> Result<SdpSolution, SdpError> {
    problem.validate()?;
    let nv = problem.n_vars();
    let c: Vec<f64> = problem.objective_coeffs().to_vec();
    let blocks: Vec<Block> = problem
        .blocks()
        .iter()
        .map(|b| Block {
            f0: b.constant().to_mat(),
            terms: b.terms().iter().map(|(v, m)| (*v, m.to_mat())).collect(),
        })
        .collect();
    let total_dim: f64 = blocks.iter().map(|b| b.f0.rows() as f64).sum();

    let c_inf = c.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut data_inf = 0.0_f64;
    for b in &blocks {
        data_inf = data_inf.max(b.f0.norm_inf());
        for (_, f) in &b.terms {
            data_inf = data_inf.max(f.norm_inf());
        }
    }
    let fnorm = 1.0 + data_inf;

    // Infeasible start on the identity, scaled to the data magnitude.
    let xi = 10.0 * (1.0 + c_inf.max(data_inf));
    let mut xs: Vec<Mat> = blocks.iter().map(|b| Mat::identity(b.f0.rows()).scale(xi)).collect();
    let mut ss: Vec<Mat> = xs.clone();
    let mut y = vec![0.0_f64; nv];

    let mut converged = false;
    let mut iterations = 0;
    let mut stall = 0_u32;
    let mut p_res = f64::INFINITY;
    let mut d_res = f64::INFINITY;
    let mut comp = f64::INFINITY;

    for iter in 0..settings.max_iter {
        iterations = iter;

        // Residuals of the current iterate.
        let fy: Vec<Mat> = blocks.iter().map(|b| b.eval(&y)).collect();
        let rd: Vec<Mat> = fy.iter().zip(&ss).map(|(f, s)| f.sub(s)).collect();
        let mut rp = c.clone();
        for (b, block) in blocks.iter().enumerate() {
            for (v, f) in &block.terms {
                rp[*v] += f.dot(&xs[b]);
            }
        }
        let pobj: f64 = blocks.iter().zip(&xs).map(|(b, x)| b.f0.dot(x)).sum();
        let dobj: f64 = c.iter().zip(&y).map(|(ci, yi)| ci * yi).sum();
        comp = xs.iter().zip(&ss).map(|(x, s)| x.dot(s)).sum();
        p_res = rp.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        d_res = rd.iter().fold(0.0_f64, |a, m| a.max(m.norm_inf()));

        let p_rel = p_res / (1.0 + c_inf);
        let d_rel = d_res / fnorm;
        let gap_rel = comp.abs() / (1.0 + pobj.abs() + dobj.abs());
        if p_rel <= settings.tol && d_rel <= settings.tol && gap_rel <= settings.tol {
            converged = true;
            break;
        }

        // Divergence heuristics: an unbounded objective, or an exploding
        // dual-side iterate X (the footprint of LMIs with no strictly
        // feasible point).
        if dobj > 1e10 * (1.0 + c_inf) {
            return Ok(finish(SdpStatus::Unbounded, &y, &c, comp, p_res, d_res, iterations));
        }
        if xs.iter().map(Mat::norm_inf).fold(0.0_f64, f64::max) > 1e9 * xi {
            return Ok(finish(SdpStatus::Infeasible, &y, &c, comp, p_res, d_res, iterations));
        }

        // Factorizations of the current iterate.
        let (ls, lx) = match (try_cholesky_all(&ss), try_cholesky_all(&xs)) {
            (Some(ls), Some(lx)) => (ls, lx),
            _ => break,
        };
        let sinv: Vec<Mat> = ls.iter().map(spd_inverse_from_chol).collect();

        // Schur complement matrix M̃ᵢⱼ = Fᵢ • sym(X Fⱼ S⁻¹).
        let mut mmat = Mat::zeros(nv, nv);
        for (b, block) in blocks.iter().enumerate() {
            let u: Vec<Mat> = block
                .terms
                .iter()
                .map(|(_, f)| xs[b].matmul(f).matmul(&sinv[b]).symmetrize())
                .collect();
            for (vi, fi) in &block.terms {
                for (tj, (vj, _)) in block.terms.iter().enumerate() {
                    mmat.add_to(*vi, *vj, fi.dot(&u[tj]));
                }
            }
        }
        let mmat = mmat.symmetrize();
        let lm = match cholesky_with_ridge(&mmat) {
            Some(l) => l,
            None => break,
        };

        // Right-hand-side pieces: tr(Fᵢ S⁻¹) and Fᵢ • sym(X R_d S⁻¹).
        let mut tr_f_sinv = vec![0.0_f64; nv];
        let mut f_dot_xrds = vec![0.0_f64; nv];
        for (b, block) in blocks.iter().enumerate() {
            let t = xs[b].matmul(&rd[b]).matmul(&sinv[b]).symmetrize();
            for (v, f) in &block.terms {
                tr_f_sinv[*v] += f.dot(&sinv[b]);
                f_dot_xrds[*v] += f.dot(&t);
            }
        }

        // Predictor: pure Newton step toward ν = 0.
        let rhs_aff: Vec<f64> = (0..nv).map(|i| c[i] - f_dot_xrds[i]).collect();
        let dy_aff = chol_solve_refined(&lm, &mmat, &rhs_aff);
        let ds_aff = directions_s(&blocks, &rd, &dy_aff);
        let dx_aff: Vec<Mat> = (0..blocks.len())
            .map(|b| {
                // sym(−X − X ΔS S⁻¹)
                let t = xs[b].matmul(&ds_aff[b]).matmul(&sinv[b]);
                t.add(&xs[b]).scale(-1.0).symmetrize()
            })
            .collect();

        let ap_aff = max_step(&lx, &dx_aff).min(1.0);
        let ad_aff = max_step(&ls, &ds_aff).min(1.0);
        let mu = comp / total_dim;
        let mut comp_aff = 0.0_f64;
        for b in 0..blocks.len() {
            let xn = add_scaled_new(&xs[b], ap_aff, &dx_aff[b]);
            let sn = add_scaled_new(&ss[b], ad_aff, &ds_aff[b]);
            comp_aff += xn.dot(&sn);
        }
        let mu_aff = (comp_aff / total_dim).max(0.0);
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-10, 0.9999);
        let nu = sigma * mu;

        // Corrector: recenter toward ν and absorb the second-order term
        // H = ΔX_aff ΔS_aff, reusing the Schur factorization.
        let hs: Vec<Mat> = (0..blocks.len())
            .map(|b| dx_aff[b].matmul(&ds_aff[b]).matmul(&sinv[b]))
            .collect();
        let mut f_dot_hs = vec![0.0_f64; nv];
        for (b, block) in blocks.iter().enumerate() {
            let hsym = hs[b].symmetrize();
            for (v, f) in &block.terms {
                f_dot_hs[*v] += f.dot(&hsym);
            }
        }
        let rhs: Vec<f64> =
            (0..nv).map(|i| c[i] + nu * tr_f_sinv[i] - f_dot_xrds[i] - f_dot_hs[i]).collect();
        let dy = chol_solve_refined(&lm, &mmat, &rhs);
        let ds = directions_s(&blocks, &rd, &dy);
        let dx: Vec<Mat> = (0..blocks.len())
            .map(|b| {
                // sym(ν S⁻¹ − X − H S⁻¹ − X ΔS S⁻¹)
                let mut t = sinv[b].scale(nu);
                t = t.sub(&xs[b]);
                t = t.sub(&hs[b]);
                t = t.sub(&xs[b].matmul(&ds[b]).matmul(&sinv[b]));
                t.symmetrize()
            })
            .collect();

        let mut ap = (settings.step_scale * max_step(&lx, &dx)).min(1.0);
        let mut ad = (settings.step_scale * max_step(&ls, &ds)).min(1.0);

        // Guarded update: the new iterate must stay positive definite.
        for _ in 0..30 {
            if (0..blocks.len()).all(|b| cholesky(&add_scaled_new(&xs[b], ap, &dx[b])).is_some()) {
                break;
            }
            ap *= 0.5;
        }
        for _ in 0..30 {
            if (0..blocks.len()).all(|b| cholesky(&add_scaled_new(&ss[b], ad, &ds[b])).is_some()) {
                break;
            }
            ad *= 0.5;
        }

        for b in 0..blocks.len() {
            xs[b].add_scaled(ap, &dx[b]);
            ss[b].add_scaled(ad, &ds[b]);
        }
        for i in 0..nv {
            y[i] += ad * dy[i];
        }

        if ap < 1e-10 && ad < 1e-10 {
            stall += 1;
            if stall >= 3 {
                break;
            }
        } else {
            stall = 0;
        }
        iterations = iter + 1;
    }

    if !converged {
        // A stalled or iteration-capped iterate can still be accurate enough
        // to return: when the optimum sits on an implied equality the primal
        // residual plateaus near √ε regardless of further steps, while the
        // dual residual and complementarity are at machine precision. Accept
        // the point at the weaker tolerance in that case.
        let pobj: f64 = blocks.iter().zip(&xs).map(|(b, x)| b.f0.dot(x)).sum();
        let dobj: f64 = c.iter().zip(&y).map(|(ci, yi)| ci * yi).sum();
        let gap_rel = comp.abs() / (1.0 + pobj.abs() + dobj.abs());
        converged = p_res / (1.0 + c_inf) <= settings.weak_tol
            && d_res / fnorm <= settings.weak_tol
            && gap_rel <= settings.weak_tol;
    }
    let mut status = if converged { SdpStatus::Optimal } else { SdpStatus::MaxIter };
    if converged {
        // Check the returned point itself: F(y) must be semidefinite up to
        // reporting accuracy, independently of the iterate bookkeeping.
        let worst = blocks
            .iter()
            .map(|b| {
                let m = SymMatrix::from_mat(&b.eval(&y));
                match symmetric_eigen(&m, false) {
                    Ok(sp) => sp.values.last().copied().unwrap_or(0.0),
                    Err(_) => f64::NEG_INFINITY,
                }
            })
            .fold(f64::INFINITY, f64::min);
        if worst < -1e-7 * fnorm {
            status = SdpStatus::MaxIter;
        }
    } else if comp.abs() / total_dim < 1e-10 * fnorm && p_res / (1.0 + c_inf) > 1e-4 {
        // Complementarity collapsed without primal feasibility: the LMI
        // system has no strictly feasible point.
        status = SdpStatus::Infeasible;
    }
    Ok(finish(status, &y, &c, comp, p_res, d_res, iterations))
}

fn finish(
    status: SdpStatus,
    y: &[f64],
    c: &[f64],
    comp: f64,
    p_res: f64,
    d_res: f64,
    iterations: usize,
) -> SdpSolution {
    let objective: f64 = c.iter().zip(y).map(|(ci, yi)| ci * yi).sum();
    SdpSolution {
        status,
        x: y.to_vec(),
        objective,
        duality_gap: comp.abs(),
        max_residual: p_res.max(d_res),
        iterations,
    }
}

fn directions_s(blocks: &[Block], rd: &[Mat], dy: &[f64]) -> Vec<Mat> {
    blocks
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let mut m = rd[b].clone();
            for (v, f) in &block.terms {
                m.add_scaled(dy[*v], f);
            }
            m
        })
        .collect()
}

fn try_cholesky_all(ms: &[Mat]) -> Option<Vec<Mat>> {
    ms.iter().map(cholesky).collect()
}

/// Lower-triangular Cholesky factor, or `None` if the matrix is not
/// numerically positive definite.
fn cholesky(m: &Mat) -> Option<Mat> {
    let n = m.rows();
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return None;
                }
                l.set(i, i, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Some(l)
}

/// Cholesky with an escalating diagonal ridge, for the Schur matrix whose
/// conditioning degrades near convergence.
fn cholesky_with_ridge(m: &Mat) -> Option<Mat> {
    if let Some(l) = cholesky(m) {
        return Some(l);
    }
    let n = m.rows();
    let scale = 1.0 + (0..n).map(|i| m.get(i, i).abs()).sum::<f64>() / n as f64;
    let mut ridge = 1e-14 * scale;
    while ridge <= 1e-6 * scale {
        let mut mj = m.clone();
        for i in 0..n {
            mj.add_to(i, i, ridge);
        }
        if let Some(l) = cholesky(&mj) {
            return Some(l);
        }
        ridge *= 100.0;
    }
    None
}

/// Solves `L Z = B` for Z (forward substitution, column by column).
fn forward_solve(l: &Mat, b: &Mat) -> Mat {
    let n = l.rows();
    let cols = b.cols();
    let mut z = b.clone();
    for c in 0..cols {
        for i in 0..n {
            let mut v = z.get(i, c);
            for k in 0..i {
                v -= l.get(i, k) * z.get(k, c);
            }
            z.set(i, c, v / l.get(i, i));
        }
    }
    z
}

/// `(L Lᵀ)⁻¹`, symmetrized.
fn spd_inverse_from_chol(l: &Mat) -> Mat {
    let linv = forward_solve(l, &Mat::identity(l.rows()));
    linv.transpose().matmul(&linv).symmetrize()
}

fn chol_solve_vec(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut z = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] -= l.get(i, k) * z[k];
        }
        z[i] /= l.get(i, i);
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            z[i] -= l.get(k, i) * z[k];
        }
        z[i] /= l.get(i, i);
    }
    z
}

/// Cholesky solve with one step of iterative refinement.
fn chol_solve_refined(l: &Mat, m: &Mat, b: &[f64]) -> Vec<f64> {
    let mut x = chol_solve_vec(l, b);
    let n = b.len();
    let mut r = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            r[i] -= m.get(i, j) * x[j];
        }
    }
    let dx = chol_solve_vec(l, &r);
    for i in 0..n {
        x[i] += dx[i];
    }
    x
}

/// Largest α with `M + αΔ ⪰ 0` over all blocks, given Cholesky factors of
/// the M's; clipped to a large finite value when no Δ points out of the cone.
fn max_step(ls: &[Mat], deltas: &[Mat]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (l, d) in ls.iter().zip(deltas) {
        // G = L⁻¹ Δ L⁻ᵀ; the boundary is at −1/λmin(G) when λmin < 0.
        let w = forward_solve(l, d);
        let g = forward_solve(l, &w.transpose()).transpose();
        let gs = SymMatrix::from_mat(&g);
        let Ok(sp) = symmetric_eigen(&gs, false) else {
            return 0.0;
        };
        let lam_min = sp.values.last().copied().unwrap_or(0.0);
        let lam_max_abs = sp.values.first().map(|v| v.abs()).unwrap_or(0.0);
        if lam_min < -1e-14 * (1.0 + lam_max_abs) {
            alpha = alpha.min(-1.0 / lam_min);
        }
    }
    alpha.min(1e16)
}

#[cfg(test)]
mod tests {
    use super::super::{SdpProblem, SdpSettings, SdpStatus};
    use super::*;

    fn settings() -> SdpSettings {
        SdpSettings::default()
    }

    #[test]
    fn largest_eigenvalue_of_diagonal_matrix() {
        // max −t s.t. tI − diag(3, 1) ⪰ 0, optimum t = 3.
        let mut p = SdpProblem::new();
        let t = p.add_var("t", -1.0);
        let b = p.begin_block("tI - M", 2);
        p.add_const(b, 0, 0, -3.0);
        p.add_const(b, 1, 1, -1.0);
        p.add_coeff(b, t, 0, 0, 1.0);
        p.add_coeff(b, t, 1, 1, 1.0);
        let sol = solve_sdp(&p, &settings()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.x[0] - 3.0).abs() < 1e-6, "t = {}", sol.x[0]);
        assert!((sol.objective + 3.0).abs() < 1e-6);
    }

    #[test]
    fn linear_program_via_unit_blocks() {
        // max x + y s.t. 0 ≤ x ≤ 2, 0 ≤ y ≤ 3 → 5.
        let mut p = SdpProblem::new();
        let x = p.add_var("x", 1.0);
        let y = p.add_var("y", 1.0);
        p.add_lower_bound(x, 0.0);
        p.add_upper_bound(x, 2.0);
        p.add_lower_bound(y, 0.0);
        p.add_upper_bound(y, 3.0);
        let sol = solve_sdp(&p, &settings()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.objective - 5.0).abs() < 1e-6);
        assert!((sol.x[0] - 2.0).abs() < 1e-6);
        assert!((sol.x[1] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn boundary_optimum_on_correlation_block() {
        // max t s.t. [[1, t], [t, 1]] ⪰ 0; the optimum t = 1 sits exactly on
        // the rank boundary.
        let mut p = SdpProblem::new();
        let t = p.add_var("t", 1.0);
        let b = p.begin_block("corr", 2);
        p.add_const(b, 0, 0, 1.0);
        p.add_const(b, 1, 1, 1.0);
        p.add_coeff(b, t, 0, 1, 1.0);
        let sol = solve_sdp(&p, &settings()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-6, "objective = {}", sol.objective);
    }

    #[test]
    fn negative_objective_with_lower_bound() {
        // max −x s.t. x ≥ 5 → optimum −5.
        let mut p = SdpProblem::new();
        let x = p.add_var("x", -1.0);
        p.add_lower_bound(x, 5.0);
        let sol = solve_sdp(&p, &settings()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.objective + 5.0).abs() < 1e-6);
    }

    #[test]
    fn contradictory_bounds_are_not_reported_optimal() {
        // x ≥ 1 and x ≤ 0 cannot both hold.
        let mut p = SdpProblem::new();
        let x = p.add_var("x", 1.0);
        p.add_lower_bound(x, 1.0);
        p.add_upper_bound(x, 0.0);
        let sol = solve_sdp(&p, &settings()).unwrap();
        assert_ne!(sol.status, SdpStatus::Optimal, "status = {:?}", sol.status);
    }

    #[test]
    fn missing_upper_bound_is_not_reported_optimal() {
        // max x s.t. x ≥ 0 is unbounded above.
        let mut p = SdpProblem::new();
        let x = p.add_var("x", 1.0);
        p.add_lower_bound(x, 0.0);
        let sol = solve_sdp(&p, &settings()).unwrap();
        assert_ne!(sol.status, SdpStatus::Optimal, "status = {:?}", sol.status);
    }

    #[test]
    fn repeated_solves_are_bitwise_identical() {
        let build = || {
            let mut p = SdpProblem::new();
            let t = p.add_var("t", 1.0);
            let b = p.begin_block("corr", 2);
            p.add_const(b, 0, 0, 1.0);
            p.add_const(b, 1, 1, 1.0);
            p.add_coeff(b, t, 0, 1, 1.0);
            p
        };
        let a = solve_sdp(&build(), &settings()).unwrap();
        let b = solve_sdp(&build(), &settings()).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn cholesky_round_trip() {
        let m = Mat::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        let back = l.matmul(&l.transpose());
        assert!(back.max_abs_diff(&m) < 1e-12);
        let x = chol_solve_vec(&l, &[2.0, 5.0]);
        // Solve [[4,2],[2,3]] x = [2,5] → x = (−0.5, 2).
        assert!((x[0] + 0.5).abs() < 1e-12);
        assert!((x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_matrix_has_no_cholesky() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(cholesky(&m).is_none());
    }
}
