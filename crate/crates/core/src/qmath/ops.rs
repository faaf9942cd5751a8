use super::matrix::{ComplexMatrix, C64};
use super::pauli::Pauli;
use super::state::{total_dim, DensityMatrix};
use crate::error::{QError, Result};

/// Row-major strides of a tensor layout.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digit(index: usize, stride: usize, dim: usize) -> usize {
    (index / stride) % dim
}

/// Reduced state on the `keep` subsystems (0-based), in ascending order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (dims, matrix) = partial_trace_matrix(rho.matrix(), rho.dims(), keep)?;
    Ok(DensityMatrix::from_parts_unchecked(dims, matrix))
}

/// Partial trace of an arbitrary square operator laid out as `dims`.
/// Returns the kept dimension list and the reduced operator.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<(Vec<usize>, ComplexMatrix)> {
    let d = total_dim(dims);
    if m.rows() != d || m.cols() != d {
        return Err(QError::DimensionMismatch {
            expected: format!("{d}x{d}"),
            actual: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if keep.is_empty() {
        return Err(QError::InvalidSubsystem("keep set is empty".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(QError::InvalidSubsystem(format!("duplicate subsystem in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(QError::InvalidSubsystem(format!("subsystem {bad} out of range for {} subsystems", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let st = strides(dims);
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kept_st = strides(&kept_dims);
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_st = strides(&traced_dims);
    let dk = total_dim(&kept_dims);
    let dt = total_dim(&traced_dims).max(1);

    // group full indices by their traced digits
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(dk); dt];
    for x in 0..d {
        let ki: usize = kept.iter().enumerate().map(|(j, &k)| digit(x, st[k], dims[k]) * kept_st[j]).sum();
        let ti: usize = traced.iter().enumerate().map(|(j, &k)| digit(x, st[k], dims[k]) * traced_st[j]).sum();
        groups[ti].push((ki, x));
    }
    let mut out = ComplexMatrix::zeros(dk, dk);
    for group in &groups {
        for &(ki, xi) in group {
            for &(kj, xj) in group {
                out[(ki, kj)] += m[(xi, xj)];
            }
        }
    }
    Ok((kept_dims, out))
}

/// Transpose of the `subsystem` tensor factor only (0-based).
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.dims(), subsystem)
}

pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    let d = total_dim(dims);
    if m.rows() != d || m.cols() != d {
        return Err(QError::DimensionMismatch {
            expected: format!("{d}x{d}"),
            actual: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if subsystem >= dims.len() {
        return Err(QError::InvalidSubsystem(format!(
            "subsystem {subsystem} out of range for {} subsystems",
            dims.len()
        )));
    }
    let stride = strides(dims)[subsystem];
    let ds = dims[subsystem];
    Ok(ComplexMatrix::from_fn(d, d, |x, y| {
        let dx = digit(x, stride, ds);
        let dy = digit(y, stride, ds);
        // exchange the subsystem digit between row and column
        let x2 = x - dx * stride + dy * stride;
        let y2 = y - dy * stride + dx * stride;
        m[(x2, y2)]
    }))
}

/// Pauli-expansion coefficients of a two-qubit state:
/// rho = (1/4)(I + a.sigma (x) I + I (x) b.sigma + sum c_rs sigma_r (x) sigma_s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochCoefficients {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [[f64; 3]; 3],
}

impl BlochCoefficients {
    /// Rebuilds the 4x4 operator from the coefficients.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let id = Pauli::I.matrix();
        let mut m = id.kron(&id);
        for (r, pr) in Pauli::BLOCH.iter().enumerate() {
            m = &m + &pr.matrix().kron(&id).scale_real(self.a[r]);
            m = &m + &id.kron(&pr.matrix()).scale_real(self.b[r]);
            for (s, ps) in Pauli::BLOCH.iter().enumerate() {
                m = &m + &pr.matrix().kron(&ps.matrix()).scale_real(self.c[r][s]);
            }
        }
        m.scale_real(0.25)
    }
}

fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> Result<f64> {
    let v: C64 = (rho * op).trace();
    if v.im.abs() > 1e-10 {
        return Err(QError::InvalidState(format!("expectation value {v} is not real")));
    }
    Ok(v.re)
}

pub fn bloch_coefficients(rho: &DensityMatrix) -> Result<BlochCoefficients> {
    if rho.dims() != [2, 2] {
        return Err(QError::DimensionMismatch { expected: "dims [2, 2]".into(), actual: format!("{:?}", rho.dims()) });
    }
    let m = rho.matrix();
    let id = Pauli::I.matrix();
    let mut out = BlochCoefficients { a: [0.0; 3], b: [0.0; 3], c: [[0.0; 3]; 3] };
    for (r, pr) in Pauli::BLOCH.iter().enumerate() {
        out.a[r] = expectation(m, &pr.matrix().kron(&id))?;
        out.b[r] = expectation(m, &id.kron(&pr.matrix()))?;
        for (s, ps) in Pauli::BLOCH.iter().enumerate() {
            out.c[r][s] = expectation(m, &pr.matrix().kron(&ps.matrix()))?;
        }
    }
    Ok(out)
}
