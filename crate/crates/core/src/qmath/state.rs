use super::eigen::hermitian_eigenvalues;
use super::matrix::{inner, kron_vec, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{QError, Result};
use crate::tolerances::Tolerances;

pub(crate) fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(QError::InvalidState(format!("subsystem dimensions must be >= 2, got {dims:?}")));
    }
    Ok(total_dim(dims))
}

/// Normalized state vector on a tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        Self::new_with(dims, amplitudes, &Tolerances::DEFAULT)
    }

    pub fn new_with(dims: Vec<usize>, amplitudes: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        let d = check_dims(&dims)?;
        if amplitudes.len() != d {
            return Err(QError::DimensionMismatch {
                expected: format!("{d} amplitudes"),
                actual: format!("{}", amplitudes.len()),
            });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tol.pure_norm {
            return Err(QError::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(QError::InvalidState("zero vector".into()));
        }
        Self::new(dims, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let d = check_dims(&dims)?;
        if index >= d {
            return Err(QError::InvalidState(format!("basis index {index} out of range {d}")));
        }
        let mut amps = vec![ZERO; d];
        amps[index] = ONE;
        Ok(Self { dims, amplitudes: amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn kron(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState { dims, amplitudes: kron_vec(&self.amplitudes, &other.amplitudes) }
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims.clone(), matrix: self.projector() }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator with its subsystem
/// layout. Subsystem 0 is the most significant tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(dims, matrix, &Tolerances::DEFAULT)
    }

    pub fn new_with(dims: Vec<usize>, matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let d = check_dims(&dims)?;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(QError::DimensionMismatch {
                expected: format!("{d}x{d}"),
                actual: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let herm = matrix.hermitian_deviation();
        if herm > tol.hermitian {
            return Err(QError::NotHermitian { deviation: herm });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(QError::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < tol.min_eigenvalue {
            return Err(QError::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { dims, matrix })
    }

    /// Normalizes a positive operator by its trace, returning the state and
    /// the trace that was divided out.
    pub fn from_unnormalized(dims: Vec<usize>, matrix: ComplexMatrix, tol: &Tolerances) -> Result<(Self, f64)> {
        let weight = matrix.trace().re;
        if weight < tol.min_weight {
            return Err(QError::ZeroWeight(weight));
        }
        let state = Self::new_with(dims, matrix.scale_real(1.0 / weight), tol)?;
        Ok((state, weight))
    }

    /// Skips validation; for results that are valid by construction.
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(total_dim(&dims), matrix.rows());
        Self { dims, matrix }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d = check_dims(&dims)?;
        Ok(Self { dims, matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { dims, matrix: self.matrix.kron(&other.matrix) }
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `U rho U^dagger`, keeping the subsystem layout.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(QError::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim()),
                actual: format!("{}x{}", u.rows(), u.cols()),
            });
        }
        Ok(DensityMatrix { dims: self.dims.clone(), matrix: u.conjugate(&self.matrix)? })
    }

    /// Max entrywise distance between the two density matrices.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}
