//! Dense complex linear algebra substrate.
//!
//! Dimensions in this crate are tiny (the largest matrices are Choi states
//! of dimension `(pq)^2`), so everything is dense, direct and written for
//! auditability rather than speed: a cyclic Jacobi eigensolver for
//! Hermitian matrices and a Pade scaling-and-squaring exponential that is
//! deliberately independent of the Fourier closed forms it is used to
//! check.

mod eigen;
mod entropy;
mod expm;
mod matrix;

pub use eigen::{eigen_hermitian, EigenDecomposition};
pub use entropy::relative_entropy;
pub use expm::matrix_exponential;
pub use matrix::{dft_matrix, tensor_product, ComplexMatrix, DensityMatrix, UnitaryMatrix};

/// Maximum dimension a tensor product is allowed to produce.
pub const TENSOR_DIM_GUARD: usize = 1024;

/// Tolerance for Hermiticity / unitarity / trace validation.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Eigenvalues below this magnitude are treated as exactly zero before
/// taking logarithms.
pub const EIGEN_CLIP: f64 = 1e-12;
