//! Kraus-operator channels, their Choi fingerprints, and closed-form
//! constructors for the Pauli channels induced by the two teleportation
//! schemes.

use crate::error::{QError, Result};
use crate::qmath::{c, hermitian_eigenvalues, ComplexMatrix, DensityMatrix, C64, ONE, ZERO};
use crate::states::{validate_spectrum, BellIndex, MeasurementOutcome};
use crate::tolerances::Tolerances;

/// Declared completeness class of a Kraus set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Completeness {
    /// sum A^dagger A = I
    TracePreserving,
    /// sum A^dagger A <= I
    TraceDecreasing,
    /// No constraint; application must renormalize.
    ConditionalUnnormalized,
}

#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    completeness: Completeness,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>, completeness: Completeness) -> Result<Self> {
        Self::new_with(operators, completeness, &Tolerances::DEFAULT)
    }

    pub fn new_with(operators: Vec<ComplexMatrix>, completeness: Completeness, tol: &Tolerances) -> Result<Self> {
        let dim = operators.first().ok_or_else(|| QError::InvalidChannel("no Kraus operators".into()))?.rows();
        if operators.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(QError::InvalidChannel(format!("operators must all be {dim}x{dim}")));
        }
        if operators.iter().any(|a| a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(QError::InvalidChannel("non-finite entry".into()));
        }
        let channel = Self { dim, operators, completeness };
        match completeness {
            Completeness::TracePreserving => {
                let defect = channel.completeness_defect();
                if defect > tol.completeness {
                    return Err(QError::InvalidChannel(format!(
                        "completeness defect {defect:e} for a trace-preserving set"
                    )));
                }
            }
            Completeness::TraceDecreasing => {
                let slack = &ComplexMatrix::identity(dim) - &channel.gram();
                let min = hermitian_eigenvalues(&slack)?[0];
                if min < -tol.completeness {
                    return Err(QError::InvalidChannel(format!("sum A^dagger A exceeds I by {:e}", -min)));
                }
            }
            Completeness::ConditionalUnnormalized => {}
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, operators: vec![ComplexMatrix::identity(dim)], completeness: Completeness::TracePreserving }
    }

    /// Single-operator channel for a unitary `u`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u], Completeness::TracePreserving)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    /// sum A^dagger A
    pub fn gram(&self) -> ComplexMatrix {
        self.operators.iter().fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, a| &acc + &(&a.adjoint() * a))
    }

    /// max |(sum A^dagger A - I)_rc|
    pub fn completeness_defect(&self) -> f64 {
        self.gram().max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// sum A rho A^dagger without normalization.
    pub fn apply_unnormalized(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(QError::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim),
                actual: format!("{}x{}", rho.rows(), rho.cols()),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.operators {
            out = &out + &a.conjugate(rho)?;
        }
        Ok(out)
    }

    /// Applies the channel and renormalizes; returns the state and the
    /// weight tr(sum A rho A^dagger) that was divided out.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<(DensityMatrix, f64)> {
        self.apply_with(rho, &Tolerances::DEFAULT)
    }

    pub fn apply_with(&self, rho: &DensityMatrix, tol: &Tolerances) -> Result<(DensityMatrix, f64)> {
        let out = self.apply_unnormalized(rho.matrix())?;
        let weight = out.trace().re;
        if weight < tol.min_weight {
            return Err(QError::ZeroWeight(weight));
        }
        let normalized = ComplexMatrix::from_fn(self.dim, self.dim, |r, col| {
            (out[(r, col)] + out[(col, r)].conj()) * (0.5 / weight)
        });
        Ok((DensityMatrix::from_parts_unchecked(rho.dims().to_vec(), normalized), weight))
    }

    /// Operators scaled by a common real factor; completeness becomes
    /// conditional unless the factor is 1.
    pub fn scaled(&self, factor: f64) -> KrausChannel {
        KrausChannel {
            dim: self.dim,
            operators: self.operators.iter().map(|a| a.scale_real(factor)).collect(),
            completeness: if factor == 1.0 { self.completeness } else { Completeness::ConditionalUnnormalized },
        }
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi(self)
    }
}

/// Kraus set {B_n A_m}: apply `inner` first, then `outer`. The completeness
/// class is the weaker of the two.
pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
    if outer.dim != inner.dim {
        return Err(QError::DimensionMismatch {
            expected: format!("dim {}", inner.dim),
            actual: format!("dim {}", outer.dim),
        });
    }
    let mut ops = Vec::with_capacity(outer.operators.len() * inner.operators.len());
    for b in &outer.operators {
        for a in &inner.operators {
            ops.push(b * a);
        }
    }
    Ok(KrausChannel { dim: inner.dim, operators: ops, completeness: outer.completeness.max(inner.completeness) })
}

/// Choi matrix sum_A (A (x) I)|Omega><Omega|(A (x) I)^dagger with the
/// unnormalized |Omega> = sum_i |ii>.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Max entrywise difference; infinite for mismatched dimensions.
    pub fn distance(&self, other: &ChoiMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Rescaled so that the trace equals the channel dimension, i.e. the
    /// Choi matrix a trace-preserving channel with the same action would have.
    pub fn normalized(&self) -> ChoiMatrix {
        let d = (self.matrix.rows() as f64).sqrt();
        let tr = self.matrix.trace().re;
        let factor = if tr.abs() > 0.0 { d / tr } else { 1.0 };
        ChoiMatrix { matrix: self.matrix.scale_real(factor) }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }
}

pub fn choi(channel: &KrausChannel) -> ChoiMatrix {
    let d = channel.dim;
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for a in &channel.operators {
        // (A (x) I)|Omega> has entry A[r, i] at index r*d + i
        let v: Vec<C64> = (0..d * d).map(|x| a[(x / d, x % d)]).collect();
        for x in 0..d * d {
            if v[x] == ZERO {
                continue;
            }
            for y in 0..d * d {
                m[(x, y)] += v[x] * v[y].conj();
            }
        }
    }
    ChoiMatrix { matrix: m }
}

pub fn choi_distance(a: &KrausChannel, b: &KrausChannel) -> f64 {
    choi(a).distance(&choi(b))
}

/// Choi distance after rescaling both to trace = dim. Compares channel
/// action up to an overall weight.
pub fn choi_distance_normalized(a: &KrausChannel, b: &KrausChannel) -> f64 {
    choi(a).normalized().distance(&choi(b).normalized())
}

fn bell_phase(b: BellIndex) -> C64 {
    // |B_k> = (I (x) w_k s_k)|Phi+>
    if b == BellIndex::PSI_MINUS {
        c(0.0, -1.0)
    } else {
        ONE
    }
}

/// Unitary U with <B_i|_{12} (|x>_1 |B_k>_{23}) = U|x>_3 / 2: the operator
/// a single Bell-measurement teleport applies to the input when the
/// resource is |B_k> and the outcome is `i`.
///
/// Equals conj(w_i) w_k s_k s_i^T with w = (1, 1, 1, -i) and s = (I, Z, X, Y).
pub fn teleport_operator(i: BellIndex, k: BellIndex) -> ComplexMatrix {
    let phase = bell_phase(i).conj() * bell_phase(k);
    (&k.pauli().matrix() * &i.pauli().matrix().transpose()).scale(phase)
}

fn outcome_term(outcome: MeasurementOutcome, k: BellIndex, k2: BellIndex) -> ComplexMatrix {
    teleport_operator(outcome.i, k).kron(&teleport_operator(outcome.i_prime, k2))
}

/// Single-qubit generalized depolarizing channel {sqrt(q_k) s_k}.
pub fn pauli_channel(q: &[f64; 4]) -> Result<KrausChannel> {
    validate_spectrum(q)?;
    let ops = BellIndex::ALL.iter().map(|&k| k.pauli().matrix().scale_real(q[k.slot()].sqrt())).collect();
    KrausChannel::new(ops, Completeness::TracePreserving)
}

/// Two independent generalized depolarizing channels as seen after
/// outcome `outcome` of the uncorrelated scheme: 16 operators
/// sqrt(q_k q_k') U_{i,k} (x) U_{i',k'}. For outcome (1,1) these are
/// sqrt(q_k q_k') s_k (x) s_k' up to phases.
pub fn uncorrelated_channel(q: &[f64; 4], outcome: MeasurementOutcome) -> Result<KrausChannel> {
    validate_spectrum(q)?;
    let mut ops = Vec::with_capacity(16);
    for k in BellIndex::ALL {
        for k2 in BellIndex::ALL {
            let w = (q[k.slot()] * q[k2.slot()]).sqrt();
            ops.push(outcome_term(outcome, k, k2).scale_real(w));
        }
    }
    KrausChannel::new(ops, Completeness::TracePreserving)
}

/// Correlated generalized depolarizing channel in term-split form: four
/// operators sqrt(q_k) U_{i,k} (x) U_{i',k}, one per Bell term of the
/// correlated resource. For i = i' = 1 these are sqrt(q_k) s_k (x) s_k.
///
/// This is the channel of the classically correlated (dephased) resource.
/// The pure correlated resource adds the terms coherently, see
/// [`correlated_coherent_channel`].
pub fn correlated_channel(q: &[f64; 4], outcome: MeasurementOutcome) -> Result<KrausChannel> {
    validate_spectrum(q)?;
    let ops = BellIndex::ALL.iter().map(|&k| outcome_term(outcome, k, k).scale_real(q[k.slot()].sqrt())).collect();
    KrausChannel::new(ops, Completeness::TracePreserving)
}

/// Exact conditional map of the pure correlated resource: the single
/// operator sum_k sqrt(q_k) U_{i,k} (x) U_{i',k}. Its application weight
/// on an input is 16 times the outcome probability.
pub fn correlated_coherent_channel(q: &[f64; 4], outcome: MeasurementOutcome) -> Result<KrausChannel> {
    validate_spectrum(q)?;
    let op = BellIndex::ALL
        .iter()
        .fold(ComplexMatrix::zeros(4, 4), |acc, &k| &acc + &outcome_term(outcome, k, k).scale_real(q[k.slot()].sqrt()));
    KrausChannel::new(vec![op], Completeness::ConditionalUnnormalized)
}
