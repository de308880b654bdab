//! Dense linear algebra and distribution functions used by every
//! statistical routine in the crate. Everything here is a pure function of
//! its inputs and works in `f64`.

mod matrix;
mod qr;
mod special;

pub use matrix::{dot, mean, DenseMatrix};
pub use qr::{qr_least_squares, LeastSquaresSolution, QrDecomposition, RANK_TOLERANCE};
pub use special::{
    f_p_upper, ln_beta, ln_gamma, normal_quantile, regularized_incomplete_beta,
    student_t_p_two_sided,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix of shape {rows}x{cols} cannot be factored (need rows >= cols >= 1)")]
    Shape { rows: usize, cols: usize },
    #[error("design matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },
    #[error("non-finite value in numeric input")]
    NonFinite,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} failed to converge")]
    NoConvergence(&'static str),
}
