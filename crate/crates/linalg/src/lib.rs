//! Small dense complex linear algebra.
//!
//! Everything here works on [`ComplexMatrix`], a row-major `Complex64`
//! matrix. The routines target matrices of dimension 16 or less and favour
//! accuracy over speed.

pub mod eigen;
pub mod expm;
pub mod lu;
pub mod matrix;
pub mod roots;
pub mod svd;

pub use eigen::{eigen, eigenvalues, EigenDecomposition};
pub use expm::expm;
pub use lu::{solve, Lu};
pub use matrix::{kron, ComplexMatrix};
pub use num_complex::Complex64;
pub use roots::{real_roots, PolynomialReal, RealRoot};
pub use svd::{numeric_rank, singular_values};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square: {0:?}")]
    NotSquare((usize, usize)),
    #[error("matrix dimension {dim} exceeds the limit of {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("QR iteration did not converge after {iterations} sweeps")]
    NonConvergence { iterations: usize },
    #[error("every polynomial coefficient is below the trim tolerance")]
    DegenerateAllZero,
    #[error("matrix is numerically singular")]
    Singular,
    #[error("input contains NaN or infinite entries")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, LinalgError>;
