//! Dense kernels for small matrices.

mod cholesky;
mod expm;
mod hqr;
mod jacobi;
mod matrix;

pub use cholesky::{cholesky, solve_lower};
pub use expm::mat_exp;
pub use hqr::{general_eigenvalues, spectral_radius_general, ComplexEigenvalues};
pub use jacobi::{sym_eig, SymmetricEigen};
pub use matrix::SquareMatrix;

/// Absolute floor applied to every norm-relative tolerance.
pub const ABSOLUTE_FLOOR: f64 = 1e-14;

pub(crate) fn tolerance_floor(tol: f64) -> f64 {
    tol.max(ABSOLUTE_FLOOR)
}
