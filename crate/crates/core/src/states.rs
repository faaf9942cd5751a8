//! The concrete states of the two teleportation schemes and the two scalar
//! functionals used to score them.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{QError, Result};
use crate::qmath::{c, hermitian_eigenvalues, partial_transpose, ComplexMatrix, DensityMatrix, Pauli, PureState, ZERO};
use crate::tolerances::Tolerances;

/// Bell-basis label 1..=4 for Phi+, Phi-, Psi+, Psi-.
///
/// The same index selects the noise weight `q_k` and the Pauli
/// `I, Z, X, Y` paired with that Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellIndex(u8);

impl BellIndex {
    pub const PHI_PLUS: BellIndex = BellIndex(1);
    pub const PHI_MINUS: BellIndex = BellIndex(2);
    pub const PSI_PLUS: BellIndex = BellIndex(3);
    pub const PSI_MINUS: BellIndex = BellIndex(4);
    pub const ALL: [BellIndex; 4] = [Self::PHI_PLUS, Self::PHI_MINUS, Self::PSI_PLUS, Self::PSI_MINUS];

    pub fn new(value: usize) -> Result<Self> {
        match value {
            1..=4 => Ok(BellIndex(value as u8)),
            _ => Err(QError::InvalidBellIndex(value)),
        }
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    /// Zero-based position, for indexing `q` arrays.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub fn pauli(self) -> Pauli {
        match self.0 {
            1 => Pauli::I,
            2 => Pauli::Z,
            3 => Pauli::X,
            _ => Pauli::Y,
        }
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            1 => "Phi+",
            2 => "Phi-",
            3 => "Psi+",
            _ => "Psi-",
        }
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Joint outcome of the two Bell measurements: `i` on systems (1,3) and
/// `i_prime` on systems (2,5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementOutcome {
    pub i: BellIndex,
    pub i_prime: BellIndex,
}

impl MeasurementOutcome {
    pub fn new(i: usize, i_prime: usize) -> Result<Self> {
        Ok(Self { i: BellIndex::new(i)?, i_prime: BellIndex::new(i_prime)? })
    }

    /// All 16 outcomes, `i` major.
    pub fn all() -> Vec<MeasurementOutcome> {
        BellIndex::ALL
            .iter()
            .flat_map(|&i| BellIndex::ALL.iter().map(move |&i_prime| MeasurementOutcome { i, i_prime }))
            .collect()
    }
}

impl fmt::Display for MeasurementOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.i_prime)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Correlation {
    /// Two independent Bell-diagonal pairs, chi_34 (x) chi_56.
    Uncorrelated,
    /// The pure superposition sum_k sqrt(q_k) |B_k>_34 |B_k>_56.
    Correlated,
}

impl Correlation {
    pub fn name(self) -> &'static str {
        match self {
            Correlation::Uncorrelated => "uncorrelated",
            Correlation::Correlated => "correlated",
        }
    }
}

/// Werner noise parameter, phi in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&phi) {
            return Err(QError::InvalidSpectrum(format!("Werner parameter {phi} outside [0, 1]")));
        }
        Ok(Self(phi))
    }

    pub fn phi(self) -> f64 {
        self.0
    }

    pub fn spectrum(self) -> [f64; 4] {
        let low = (1.0 - self.0) / 6.0;
        [low, low, low, (1.0 + self.0) / 2.0]
    }
}

/// Noise spectrum and correlation structure of the shared resource.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceSpec {
    kind: Correlation,
    q: [f64; 4],
    phi: Option<f64>,
}

pub fn validate_spectrum(q: &[f64; 4]) -> Result<()> {
    if q.iter().any(|&x| !x.is_finite() || !(0.0..=1.0).contains(&x)) {
        return Err(QError::InvalidSpectrum(format!("entries must lie in [0, 1]: {q:?}")));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > Tolerances::DEFAULT.spectrum_sum {
        return Err(QError::InvalidSpectrum(format!("entries sum to {sum}, not 1")));
    }
    Ok(())
}

impl ResourceSpec {
    pub fn new(kind: Correlation, q: [f64; 4]) -> Result<Self> {
        validate_spectrum(&q)?;
        Ok(Self { kind, q, phi: None })
    }

    pub fn werner(kind: Correlation, phi: WernerParam) -> Self {
        Self { kind, q: phi.spectrum(), phi: Some(phi.phi()) }
    }

    pub fn kind(&self) -> Correlation {
        self.kind
    }

    pub fn q(&self) -> [f64; 4] {
        self.q
    }

    pub fn phi(&self) -> Option<f64> {
        self.phi
    }
}

pub fn bell_state(index: BellIndex) -> PureState {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let amps = match index.value() {
        1 => vec![h, ZERO, ZERO, h],
        2 => vec![h, ZERO, ZERO, -h],
        3 => vec![ZERO, h, h, ZERO],
        _ => vec![ZERO, h, -h, ZERO],
    };
    PureState::new(vec![2, 2], amps).expect("Bell states are normalized")
}

/// cos(theta)|00> + sin(theta)|11>.
pub fn input_pure(theta: f64) -> PureState {
    PureState::new(vec![2, 2], vec![c(theta.cos(), 0.0), ZERO, ZERO, c(theta.sin(), 0.0)])
        .expect("unit norm by construction")
}

pub fn input_state(theta: f64) -> DensityMatrix {
    input_pure(theta).to_density()
}

/// Bell-diagonal two-qubit state sum_k q_k |B_k><B_k|.
pub fn bell_diagonal(q: &[f64; 4]) -> Result<DensityMatrix> {
    validate_spectrum(q)?;
    let mut m = ComplexMatrix::zeros(4, 4);
    for b in BellIndex::ALL {
        m = &m + &bell_state(b).projector().scale_real(q[b.slot()]);
    }
    Ok(DensityMatrix::new(vec![2, 2], m).expect("convex mixture of projectors"))
}

/// Expansion of the resource in Bell-pair product terms on systems
/// (3,4,5,6): weights and vectors |B_k>_34 |B_k'>_56.
///
/// For the uncorrelated resource this is its eigendecomposition. For the
/// correlated resource it lists the terms of the coherent superposition
/// with weights q_k; the state itself is the single vector
/// sum_k sqrt(q_k) |B_k B_k>, not the mixture of these terms.
pub fn resource_terms(spec: &ResourceSpec) -> Vec<(f64, PureState)> {
    let q = spec.q();
    match spec.kind() {
        Correlation::Uncorrelated => BellIndex::ALL
            .iter()
            .flat_map(|&k| {
                BellIndex::ALL.iter().map(move |&k2| (q[k.slot()] * q[k2.slot()], bell_state(k).kron(&bell_state(k2))))
            })
            .collect(),
        Correlation::Correlated => {
            BellIndex::ALL.iter().map(|&k| (q[k.slot()], bell_state(k).kron(&bell_state(k)))).collect()
        }
    }
}

/// The correlated resource vector sum_k sqrt(q_k) |B_k>_34 |B_k>_56.
pub fn correlated_resource_vector(q: &[f64; 4]) -> Result<PureState> {
    validate_spectrum(q)?;
    let mut amps = vec![ZERO; 16];
    for k in BellIndex::ALL {
        let term = bell_state(k).kron(&bell_state(k));
        for (a, t) in amps.iter_mut().zip(term.amplitudes()) {
            *a += t * q[k.slot()].sqrt();
        }
    }
    PureState::normalized(vec![2, 2, 2, 2], amps)
}

/// 16x16 density matrix of the shared resource on systems (3,4,5,6).
pub fn resource_state(spec: &ResourceSpec) -> DensityMatrix {
    match spec.kind() {
        Correlation::Uncorrelated => {
            let chi = bell_diagonal(&spec.q()).expect("validated spectrum");
            chi.kron(&chi)
        }
        Correlation::Correlated => correlated_resource_vector(&spec.q()).expect("validated spectrum").to_density(),
    }
}

/// max(0, -2 sum of negative eigenvalues of the partial transpose on `subsystem`).
pub fn negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    negativity_with(rho, subsystem, &Tolerances::DEFAULT)
}

pub fn negativity_with(rho: &DensityMatrix, subsystem: usize, tol: &Tolerances) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    let neg_sum: f64 = hermitian_eigenvalues(&pt)?.into_iter().filter(|&l| l < -tol.negativity_cutoff).sum();
    Ok((-2.0 * neg_sum).max(0.0))
}

/// <psi|rho|psi>.
pub fn fidelity_pure(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if psi.dims() != rho.dims() {
        return Err(QError::DimensionMismatch {
            expected: format!("{:?}", psi.dims()),
            actual: format!("{:?}", rho.dims()),
        });
    }
    let amps = psi.amplitudes();
    let v = rho.matrix().mat_vec(amps)?;
    Ok(crate::qmath::inner(amps, &v).re)
}
