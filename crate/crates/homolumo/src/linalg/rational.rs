//! Exact integer/rational matrix arithmetic.
//!
//! Invertibility questions in this crate (adjacency matrices, Schur
//! complements, bridgeability tests) are decided exactly, never by a floating
//! threshold. Integer matrices are eliminated with Bareiss' fraction-free
//! scheme — every division in the update is exact, which keeps intermediates
//! as single big integers instead of rationals and limits their growth.
//! Rational matrices are reduced to the integer case by clearing row
//! denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::mat::{Mat, SymMatrix};
use super::LinalgError;

/// Dense row-major integer matrix (adjacency blocks, bridge patterns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) as f64)
    }

    /// Packed symmetric view; panics if the matrix is not square-symmetric.
    pub fn to_sym(&self) -> SymMatrix {
        assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..i {
                assert_eq!(self.get(i, j), self.get(j, i), "matrix is not symmetric");
            }
        }
        SymMatrix::from_fn(self.rows, |i, j| self.get(i, j) as f64)
    }

    pub fn sum(&self) -> i64 {
        self.data.iter().sum()
    }
}

/// Result of an exact inversion attempt; singularity is a value, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum RationalInverse {
    Invertible(RationalMatrix),
    Singular,
}

impl RationalInverse {
    pub fn invertible(self) -> Option<RationalMatrix> {
        match self {
            RationalInverse::Invertible(m) => Some(m),
            RationalInverse::Singular => None,
        }
    }
}

/// Dense row-major matrix over arbitrary-precision rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let mut out = RationalMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, BigRational::from_integer(BigInt::from(m.get(i, j))));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `K · self` with integer `K`.
    pub fn mul_int_left(&self, k: &IntMatrix) -> RationalMatrix {
        self.clone().mul_int_left_owned(k)
    }

    fn mul_int_left_owned(self, k: &IntMatrix) -> RationalMatrix {
        assert_eq!(k.cols(), self.rows);
        let mut out = RationalMatrix::zeros(k.rows(), self.cols);
        for i in 0..k.rows() {
            for l in 0..k.cols() {
                let a = k.get(i, l);
                if a == 0 {
                    continue;
                }
                let a = BigRational::from_integer(BigInt::from(a));
                for j in 0..self.cols {
                    let v = out.get(i, j) + &a * self.get(l, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self · K` with integer `K`.
    pub fn mul_int_right(&self, k: &IntMatrix) -> RationalMatrix {
        assert_eq!(self.cols, k.rows());
        let mut out = RationalMatrix::zeros(self.rows, k.cols());
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..k.cols() {
                    let b = k.get(l, j);
                    if b == 0 {
                        continue;
                    }
                    let v = out.get(i, j) + a * BigRational::from_integer(BigInt::from(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `A − self` with integer `A`.
    pub fn sub_from_int(&self, a: &IntMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (a.rows(), a.cols()));
        let mut out = RationalMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, BigRational::from_integer(BigInt::from(a.get(i, j))) - self.get(i, j));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want_one = i == j;
                let e = self.get(i, j);
                if want_one && !e.is_one() {
                    return false;
                }
                if !want_one && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Principal submatrix on the given 0-based row/column indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> RationalMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = RationalMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_f64().expect("rational out of f64 range")
        })
    }

    /// Float view of a square rational matrix that is symmetric by
    /// construction (inverses of symmetric matrices, Schur complements).
    pub fn to_sym(&self) -> SymMatrix {
        assert_eq!(self.rows, self.cols);
        SymMatrix::from_mat(&self.to_mat())
    }

    /// Exact determinant: clears row denominators, then runs Bareiss.
    pub fn determinant(&self) -> Result<BigRational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let (scaled, scales) = self.clear_denominators();
        let det = bareiss_determinant(&scaled)?;
        let mut result = BigRational::from_integer(det);
        for s in scales {
            result /= BigRational::from_integer(s);
        }
        Ok(result)
    }

    /// Exact inverse: with `D` the diagonal of row scales, `M⁻¹ = (D·M)⁻¹·D`.
    pub fn inverse(&self) -> Result<RationalInverse, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let (scaled, scales) = self.clear_denominators();
        match bareiss_inverse(&scaled)? {
            RationalInverse::Singular => Ok(RationalInverse::Singular),
            RationalInverse::Invertible(mut inv) => {
                for j in 0..inv.cols {
                    let s = BigRational::from_integer(scales[j].clone());
                    for i in 0..inv.rows {
                        let v = inv.get(i, j) * &s;
                        inv.set(i, j, v);
                    }
                }
                Ok(RationalInverse::Invertible(inv))
            }
        }
    }

    /// Multiplies each row by the LCM of its denominators; returns the
    /// resulting integer matrix and the per-row scale factors.
    fn clear_denominators(&self) -> (BigIntMatrix, Vec<BigInt>) {
        let mut scaled = BigIntMatrix::zeros(self.rows, self.cols);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = BigInt::one();
            for j in 0..self.cols {
                l = l.lcm(self.get(i, j).denom());
            }
            for j in 0..self.cols {
                let e = self.get(i, j) * BigRational::from_integer(l.clone());
                debug_assert!(e.denom().is_one());
                scaled.set(i, j, e.to_integer());
            }
            scales.push(l);
        }
        (scaled, scales)
    }
}

/// Internal big-integer working matrix for elimination.
#[derive(Debug, Clone)]
struct BigIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl BigIntMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        BigIntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    fn from_int(m: &IntMatrix) -> Self {
        let mut out = BigIntMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, BigInt::from(m.get(i, j)));
            }
        }
        out
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Bareiss forward elimination on an augmented system `[M | aug]`.
///
/// Returns the row-swap sign and leaves the matrix upper triangular on the
/// leading n columns with the k-th pivot equal (up to sign) to the k-th
/// leading principal minor of the row-permuted matrix; every division taken
/// is exact. Returns `None` when `M` is singular.
fn bareiss_forward(a: &mut BigIntMatrix, n: usize) -> Result<Option<i64>, LinalgError> {
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !a.get(r, k).is_zero());
        let Some(pr) = pivot_row else {
            return Ok(None);
        };
        if pr != k {
            a.swap_rows(pr, k);
            sign = -sign;
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            let head = a.get(i, k).clone();
            for j in k + 1..a.cols {
                let v = (&pivot * a.get(i, j) - &head * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, k, BigInt::zero());
        }
        prev = pivot;
    }
    Ok(Some(sign))
}

/// Exact determinant of an integer matrix via Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    bareiss_determinant(&BigIntMatrix::from_int(m))
}

fn bareiss_determinant(m: &BigIntMatrix) -> Result<BigInt, LinalgError> {
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    match bareiss_forward(&mut a, n)? {
        None => Ok(BigInt::zero()),
        Some(sign) => Ok(a.get(n - 1, n - 1) * BigInt::from(sign)),
    }
}

/// Exact inverse of a square integer matrix; `Singular` is a value.
pub fn rational_inverse(m: &IntMatrix) -> Result<RationalInverse, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    bareiss_inverse(&BigIntMatrix::from_int(m))
}

fn bareiss_inverse(m: &BigIntMatrix) -> Result<RationalInverse, LinalgError> {
    let n = m.rows;
    // Augment with the identity, eliminate fraction-free, then back-substitute
    // over rationals.
    let mut a = BigIntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, m.get(i, j).clone());
        }
        a.set(i, n + i, BigInt::one());
    }
    if bareiss_forward(&mut a, n)?.is_none() {
        return Ok(RationalInverse::Singular);
    }

    let mut inv = RationalMatrix::zeros(n, n);
    let mut col = vec![BigRational::zero(); n];
    for c in 0..n {
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(a.get(i, n + c).clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(a.get(i, j).clone()) * &col[j];
            }
            col[i] = acc / BigRational::from_integer(a.get(i, i).clone());
        }
        for i in 0..n {
            inv.set(i, c, col[i].clone());
        }
    }
    Ok(RationalInverse::Invertible(inv))
}

/// Exact Schur complement `A − K·B_inv·Kᵀ` with integer `A`, `K`.
pub fn schur_complement_exact(
    a: &IntMatrix,
    b_inv: &RationalMatrix,
    k: &IntMatrix,
) -> RationalMatrix {
    let kb = b_inv.mul_int_left(k); // K · B⁻¹
    let kbk = kb.mul_int_right(&k.transpose()); // K · B⁻¹ · Kᵀ
    kbk.sub_from_int(a)
}

/// Convenience: whether an integer matrix has nonzero determinant.
pub fn is_invertible(m: &IntMatrix) -> Result<bool, LinalgError> {
    Ok(!determinant(m)?.is_zero())
}

#[allow(unused_imports)]

#[cfg(test)]
mod tests {
    use super::*;

    fn path_adjacency(n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1 } else { 0 })
    }

    /// 5-ring 1-2-3-4-5 with a pendant 6 attached to vertex 4 (0-based: 3-5).
    fn fulvene_adjacency() -> IntMatrix {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (3, 5)];
        IntMatrix::from_fn(6, 6, |i, j| {
            edges.iter().any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i)) as i64
        })
    }

    #[test]
    fn k2_adjacency_is_its_own_inverse() {
        let m = IntMatrix::from_fn(2, 2, |i, j| (i != j) as i64);
        let inv = rational_inverse(&m).unwrap().invertible().unwrap();
        assert_eq!(inv, RationalMatrix::from_int(&m));
    }

    #[test]
    fn path3_is_singular() {
        let m = path_adjacency(3);
        assert_eq!(determinant(&m).unwrap(), BigInt::zero());
        assert_eq!(rational_inverse(&m).unwrap(), RationalInverse::Singular);
    }

    #[test]
    fn path4_inverse_closed_form() {
        let m = path_adjacency(4);
        assert_eq!(determinant(&m).unwrap(), BigInt::one());
        let inv = rational_inverse(&m).unwrap().invertible().unwrap();
        let want = [[0, 1, 0, -1], [1, 0, 0, 0], [0, 0, 0, 1], [-1, 0, 1, 0]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    inv.get(i, j),
                    &BigRational::from_integer(BigInt::from(want[i][j])),
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn fulvene_inverse_exact_identity_product() {
        let m = fulvene_adjacency();
        let inv = rational_inverse(&m).unwrap().invertible().unwrap();
        assert!(RationalMatrix::from_int(&m).mul(&inv).is_identity());
        assert!(inv.mul(&RationalMatrix::from_int(&m)).is_identity());
    }

    #[test]
    fn seeded_integer_matrices_invert_exactly() {
        // simple LCG so the test is fully deterministic
        let mut state = 0x9e37_79b9_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        let mut inverted = 0;
        for _ in 0..25 {
            let m = IntMatrix::from_fn(5, 5, |_, _| next());
            match rational_inverse(&m).unwrap() {
                RationalInverse::Singular => {
                    assert_eq!(determinant(&m).unwrap(), BigInt::zero());
                }
                RationalInverse::Invertible(inv) => {
                    inverted += 1;
                    assert!(RationalMatrix::from_int(&m).mul(&inv).is_identity());
                }
            }
        }
        assert!(inverted > 10, "almost all random matrices should be invertible");
    }

    #[test]
    fn rational_matrix_inverse_round_trips() {
        // M = P4⁻¹ is rational; (M⁻¹)⁻¹ = M and M⁻¹ = P4.
        let p4 = path_adjacency(4);
        let inv = rational_inverse(&p4).unwrap().invertible().unwrap();
        let back = inv.inverse().unwrap().invertible().unwrap();
        assert_eq!(back, RationalMatrix::from_int(&p4));
    }

    #[test]
    fn rational_determinant_with_denominators() {
        // det(½·I₂) = ¼
        let mut m = RationalMatrix::zeros(2, 2);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        m.set(0, 0, half.clone());
        m.set(1, 1, half);
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        assert_eq!(m.determinant().unwrap(), quarter);
    }

    #[test]
    fn schur_complement_exact_zeroing() {
        // A = B = K₂ adjacency, K = [[1,0],[1,0]]: K·B⁻¹·Kᵀ = 0, so S = A.
        let a = IntMatrix::from_fn(2, 2, |i, j| (i != j) as i64);
        let b_inv = rational_inverse(&a).unwrap().invertible().unwrap();
        let k = IntMatrix::from_fn(2, 2, |_, j| (j == 0) as i64);
        let s = schur_complement_exact(&a, &b_inv, &k);
        assert_eq!(s, RationalMatrix::from_int(&a));
    }

    #[test]
    fn principal_submatrix_reads_named_entries() {
        let p4 = path_adjacency(4);
        let inv = rational_inverse(&p4).unwrap().invertible().unwrap();
        // rows/cols {0, 2} of P4⁻¹: [[0, 0], [0, 0]]
        assert!(inv.principal_submatrix(&[0, 2]).is_zero());
        // rows/cols {0, 1} contain the 1 at (0,1)
        assert!(!inv.principal_submatrix(&[0, 1]).is_zero());
    }

    #[test]
    fn non_square_inputs_are_rejected() {
        let m = IntMatrix::zeros(2, 3);
        assert!(matches!(determinant(&m), Err(LinalgError::NotSquare(2, 3))));
        assert!(matches!(rational_inverse(&m), Err(LinalgError::NotSquare(2, 3))));
    }
}
