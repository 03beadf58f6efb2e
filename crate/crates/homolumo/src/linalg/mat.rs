//! Dense floating-point matrices.
//!
//! Two representations are used throughout the crate: [`Mat`] is a general
//! row-major rectangular matrix, and [`SymMatrix`] stores only the lower
//! triangle of a symmetric matrix so that symmetry holds by construction.
//! All orders encountered here are tiny (≤ 64), so everything is dense and
//! no attempt is made at blocking or sparsity.

use super::LinalgError;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_to(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| s * self.get(i, j))
    }

    /// `self += s * other`, in place.
    pub fn add_scaled(&mut self, s: f64, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
    }

    /// Frobenius inner product `tr(selfᵀ · other)`.
    pub fn dot(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(other.data.iter()).map(|(a, b)| a * b).sum()
    }

    /// `½ (M + Mᵀ)` for a square matrix.
    pub fn symmetrize(&self) -> Mat {
        assert_eq!(self.rows, self.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        self.sub(other).norm_inf()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Assembles `[[a, b], [c, d]]`; dimensions must be conformal.
    pub fn block2x2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = Mat::zeros(a.rows + c.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j));
            }
            for j in 0..b.cols {
                out.set(i, a.cols + j, b.get(i, j));
            }
        }
        for i in 0..c.rows {
            for j in 0..c.cols {
                out.set(a.rows + i, j, c.get(i, j));
            }
            for j in 0..d.cols {
                out.set(a.rows + i, c.cols + j, d.get(i, j));
            }
        }
        out
    }
}

/// Symmetric matrix with packed lower-triangular storage.
///
/// `get(i, j)` and `get(j, i)` read the same slot, so the symmetry invariant
/// cannot be violated by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    // index into the lower triangle, row-major: (i, j) with i >= j
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a generator; `f` is only consulted for `i >= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetrizes a square `Mat` into packed storage (averaging the halves).
    pub fn from_mat(m: &Mat) -> Self {
        assert_eq!(m.rows(), m.cols());
        SymMatrix::from_fn(m.rows(), |i, j| {
            if i == j {
                m.get(i, i)
            } else {
                0.5 * (m.get(i, j) + m.get(j, i))
            }
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed_index(i, j)] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed_index(i, j)] += v;
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix { n: self.n, data: self.data.iter().map(|v| s * v).collect() }
    }

    pub fn add_scaled(&mut self, s: f64, other: &SymMatrix) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
    }

    /// Trace inner product `⟨A, B⟩ = Σᵢⱼ AᵢⱼBᵢⱼ` over full matrices.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                sum += 2.0 * self.get(i, j) * other.get(i, j);
            }
            sum += self.get(i, i) * other.get(i, i);
        }
        sum
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Floating-point Schur complement `A − K·B_inv·Kᵀ`.
///
/// `a` is n×n symmetric, `b_inv` m×m symmetric, `k` an n×m coupling matrix.
pub fn schur_complement(a: &SymMatrix, b_inv: &SymMatrix, k: &Mat) -> Result<SymMatrix, LinalgError> {
    if k.rows() != a.order() || k.cols() != b_inv.order() {
        return Err(LinalgError::DimensionMismatch(format!(
            "schur complement: A is {0}x{0}, B_inv is {1}x{1}, K is {2}x{3}",
            a.order(),
            b_inv.order(),
            k.rows(),
            k.cols()
        )));
    }
    if !a.is_finite() || !b_inv.is_finite() || !k.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let kb = k.matmul(&b_inv.to_mat());
    let kbk = kb.matmul(&k.transpose());
    let mut out = a.clone();
    for i in 0..a.order() {
        for j in 0..=i {
            out.add_to(i, j, -0.5 * (kbk.get(i, j) + kbk.get(j, i)));
        }
    }
    Ok(out)
}
