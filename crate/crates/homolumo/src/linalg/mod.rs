//! Numerical and exact linear algebra shared by the whole crate.

mod jacobi;
mod mat;
mod rational;

pub use jacobi::{
    eigenvalues, min_eigenvalue, psd_check, symmetric_eigen, Spectrum, JACOBI_MAX_SWEEPS,
    JACOBI_OFF_NORM_TOL,
};
pub use mat::{schur_complement, Mat, SymMatrix};
pub use rational::{
    determinant, is_invertible, rational_inverse, schur_complement_exact, IntMatrix,
    RationalInverse, RationalMatrix,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}
