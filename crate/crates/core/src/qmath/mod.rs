//! Dense complex linear algebra for small tensor-product spaces.

mod eigen;
mod matrix;
mod ops;
pub mod pauli;
mod state;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use matrix::{c, inner, kron, kron_vec, ComplexMatrix, C64, I, ONE, ZERO};
pub use ops::{
    bloch_coefficients, partial_trace, partial_trace_matrix, partial_transpose, partial_transpose_matrix,
    BlochCoefficients,
};
pub use pauli::Pauli;
pub use state::{DensityMatrix, PureState};
