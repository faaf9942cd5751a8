//! Brute-force simulation of the one-pair and two-pair teleportation
//! schemes with projective Bell measurements, and extraction of the
//! per-outcome Kraus channels they induce on the teleported state.
//!
//! System labels 1..6 map to subsystem indices 0..5.

use crate::channels::{Completeness, KrausChannel};
use crate::error::{QError, Result};
use crate::exec::Execution;
use crate::qmath::{
    hermitian_eigen, kron_vec, partial_trace_matrix, BlochCoefficients, ComplexMatrix, DensityMatrix, PureState, C64,
};
use crate::states::{bell_state, resource_state, resource_terms, BellIndex, Correlation, ResourceSpec};
use crate::tolerances::Tolerances;

pub use crate::states::MeasurementOutcome;

/// Unitary that reorders tensor factors: output position `j` carries input
/// subsystem `perm[j]`, i.e. U|x_0 ... x_{n-1}> = |x_{perm[0]} ... x_{perm[n-1]}>.
/// The output layout is `[dims[perm[0]], ...]`.
pub fn permutation_unitary(perm: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(QError::InvalidPermutation(format!("{perm:?} is not a bijection on {n} subsystems")));
    }
    let d: usize = dims.iter().product();
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut u = ComplexMatrix::zeros(d, d);
    let mut digits = vec![0usize; n];
    for x in 0..d {
        let mut rem = x;
        for k in (0..n).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        let y = perm.iter().zip(&out_dims).fold(0, |acc, (&p, &dim)| acc * dim + digits[p]);
        u[(y, x)] = C64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Rank-one projectors onto the four Bell states, indexed by `BellIndex::slot`.
pub fn bell_projectors() -> [ComplexMatrix; 4] {
    BellIndex::ALL.map(|b| bell_state(b).projector())
}

/// Outcome of the one-pair scheme.
#[derive(Debug, Clone)]
pub struct SingleOutcomeRecord {
    pub outcome: BellIndex,
    pub probability: f64,
    /// `None` when the outcome has probability below the weight cutoff.
    pub conditional_state: Option<DensityMatrix>,
    /// Kraus set on the target qubit with application weight 4 * probability.
    pub extracted_channel: KrausChannel,
}

/// Outcome of the two-pair scheme.
#[derive(Debug, Clone)]
pub struct OutcomeRecord {
    pub outcome: MeasurementOutcome,
    pub probability: f64,
    /// State of systems (4,6); `None` for a zero-probability outcome.
    pub conditional_state: Option<DensityMatrix>,
    /// Kraus set on systems (4,6) with application weight 16 * probability.
    pub extracted_channel: KrausChannel,
}

fn negligible(a: &ComplexMatrix) -> bool {
    a.max_abs() < 1e-13
}

fn finish_channel(mut ops: Vec<ComplexMatrix>, dim: usize) -> Result<KrausChannel> {
    ops.retain(|a| !negligible(a));
    if ops.is_empty() {
        ops.push(ComplexMatrix::zeros(dim, dim));
    }
    let probe = KrausChannel::new(ops, Completeness::ConditionalUnnormalized)?;
    if probe.completeness_defect() <= Tolerances::DEFAULT.completeness {
        KrausChannel::new(probe.operators().to_vec(), Completeness::TracePreserving)
    } else {
        Ok(probe)
    }
}

fn conditional(matrix: ComplexMatrix, dims: Vec<usize>, tol: &Tolerances) -> (f64, Option<DensityMatrix>) {
    let p = matrix.trace().re;
    if p < tol.min_weight {
        return (p.max(0.0), None);
    }
    let n = matrix.rows();
    let normalized = ComplexMatrix::from_fn(n, n, |r, c| (matrix[(r, c)] + matrix[(c, r)].conj()) * (0.5 / p));
    (p, Some(DensityMatrix::from_parts_unchecked(dims, normalized)))
}

/// Weighted pure-state decomposition of a density matrix (eigenvectors with
/// eigenvalue above `cutoff`).
fn ensemble(rho: &DensityMatrix, cutoff: f64) -> Result<Vec<(f64, PureState)>> {
    let eig = hermitian_eigen(rho.matrix())?;
    let mut out = Vec::new();
    for (k, &w) in eig.values.iter().enumerate() {
        if w > cutoff {
            out.push((w, PureState::normalized(rho.dims().to_vec(), eig.vector(k))?));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// one pair: input on system 1, resource chi on (2,3), Bell measurement on (1,2)

/// Runs the one-pair scheme for every outcome.
pub fn simulate_single(rho_in: &DensityMatrix, chi: &DensityMatrix) -> Result<Vec<SingleOutcomeRecord>> {
    if rho_in.dims() != [2] || chi.dims() != [2, 2] {
        return Err(QError::DimensionMismatch {
            expected: "input dims [2], resource dims [2, 2]".into(),
            actual: format!("{:?}, {:?}", rho_in.dims(), chi.dims()),
        });
    }
    let tol = Tolerances::DEFAULT;
    let full = rho_in.kron(chi);
    let id2 = ComplexMatrix::identity(2);
    let channels = extract_single(chi)?;
    bell_projectors()
        .iter()
        .zip(BellIndex::ALL)
        .zip(channels)
        .map(|((proj, outcome), channel)| {
            let op = proj.kron(&id2);
            let m = op.conjugate(full.matrix())?;
            let (_, reduced) = partial_trace_matrix(&m, &[2, 2, 2], &[2])?;
            let (probability, conditional_state) = conditional(reduced, vec![2], &tol);
            Ok(SingleOutcomeRecord { outcome, probability, conditional_state, extracted_channel: channel })
        })
        .collect()
}

/// Kraus channels of the one-pair scheme, one per outcome, built from the
/// eigenvectors of the relabelled resource chi~_12 and the swap U_{1(2)3}:
/// A = 2 sqrt(q_k) <P_l|_12 (Pi_i (x) I) U |s~_k>_12, with P the Bell basis.
pub fn extract_single(chi: &DensityMatrix) -> Result<Vec<KrausChannel>> {
    let swap2 = permutation_unitary(&[1, 0], &[2, 2])?;
    let chi_tilde = chi.conjugated_by(&swap2)?;
    let terms = ensemble(&chi_tilde, 1e-15)?;
    let swap13 = permutation_unitary(&[2, 1, 0], &[2, 2, 2])?;
    let id2 = ComplexMatrix::identity(2);
    let basis = BellIndex::ALL.map(bell_state);

    let projectors = bell_projectors();
    let mut out = Vec::with_capacity(4);
    for proj in &projectors {
        let op = &proj.kron(&id2) * &swap13;
        let mut ops = Vec::new();
        for (w, s) in &terms {
            let columns: Vec<Vec<C64>> = (0..2)
                .map(|x| {
                    let target = PureState::basis(vec![2], x).expect("qubit basis");
                    op.mat_vec(s.kron(&target).amplitudes())
                })
                .collect::<Result<_>>()?;
            for p in &basis {
                let mut a = ComplexMatrix::zeros(2, 2);
                for (x, v) in columns.iter().enumerate() {
                    for t in 0..2 {
                        let amp: C64 = (0..4).map(|m| p.amplitudes()[m].conj() * v[m * 2 + t]).sum();
                        a[(t, x)] = amp * (2.0 * w.sqrt());
                    }
                }
                ops.push(a);
            }
        }
        out.push(finish_channel(ops, 2)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// two pairs: input on (1,2), resource on (3,4,5,6), Bell measurements on
// (1,3) and (2,5), target (4,6)

/// Reorders systems (1..6) to (1,3,2,5,4,6).
const MEASUREMENT_ORDER: [usize; 6] = [0, 2, 1, 4, 3, 5];
const QUBITS6: [usize; 6] = [2; 6];

fn outcome_projector(outcome: MeasurementOutcome) -> ComplexMatrix {
    let p = bell_projectors();
    p[outcome.i.slot()].kron(&p[outcome.i_prime.slot()]).kron(&ComplexMatrix::identity(4))
}

/// Runs the two-pair scheme for all 16 outcomes, evaluated with the
/// default execution strategy.
pub fn simulate_double(rho_in: &DensityMatrix, spec: &ResourceSpec) -> Result<Vec<OutcomeRecord>> {
    simulate_double_with(rho_in, spec, Execution::default())
}

pub fn simulate_double_with(
    rho_in: &DensityMatrix,
    spec: &ResourceSpec,
    exec: Execution,
) -> Result<Vec<OutcomeRecord>> {
    if rho_in.dims() != [2, 2] {
        return Err(QError::DimensionMismatch {
            expected: "input dims [2, 2]".into(),
            actual: format!("{:?}", rho_in.dims()),
        });
    }
    let tol = Tolerances::DEFAULT;
    let resource = resource_state(spec);
    let full = rho_in.kron(&resource);
    let reorder = permutation_unitary(&MEASUREMENT_ORDER, &QUBITS6)?;
    let arranged = reorder.conjugate(full.matrix())?;
    let extractor = Extractor::new(&ensemble(&resource, 1e-15)?)?;

    exec.try_map(&MeasurementOutcome::all(), |&outcome| {
        let proj = outcome_projector(outcome);
        let m = proj.conjugate(&arranged)?;
        let (_, reduced) = partial_trace_matrix(&m, &QUBITS6, &[4, 5])?;
        let (probability, conditional_state) = conditional(reduced, vec![2, 2], &tol);
        let extracted_channel = extractor.channel(outcome)?;
        Ok(OutcomeRecord { outcome, probability, conditional_state, extracted_channel })
    })
}

/// Exact Kraus channel of outcome `outcome`, from the eigendecomposition of
/// the resource state:
/// A = 4 sqrt(w_e) <P_l|_13 <P_l'|_25 (Pi_i (x) Pi_i' (x) I_46) U |e>,
/// with U carrying the input from (1,2) and the resource eigenvector |e>
/// into measurement order and P the Bell basis.
pub fn extract_kraus(spec: &ResourceSpec, outcome: MeasurementOutcome) -> Result<KrausChannel> {
    let extractor = Extractor::new(&ensemble(&resource_state(spec), 1e-15)?)?;
    extractor.channel(outcome)
}

/// Kraus channel obtained by expanding the resource term by term in Bell
/// pairs, each term contributing its own operators. Identical to
/// [`extract_kraus`] for the uncorrelated resource; for the correlated
/// resource it treats the superposition terms incoherently.
pub fn extract_term_kraus(spec: &ResourceSpec, outcome: MeasurementOutcome) -> Result<KrausChannel> {
    let extractor = Extractor::new(&resource_terms(spec))?;
    extractor.channel(outcome)
}

struct Extractor {
    /// Per resource term: sqrt(weight) and U(|ab>_12 |e>_3456) for ab = 0..4.
    arranged: Vec<(f64, Vec<Vec<C64>>)>,
    /// <P_l|_13 <P_l'|_25 as 16-vectors.
    basis: Vec<Vec<C64>>,
}

impl Extractor {
    fn new(terms: &[(f64, PureState)]) -> Result<Self> {
        let reorder = permutation_unitary(&MEASUREMENT_ORDER, &QUBITS6)?;
        let mut arranged = Vec::with_capacity(terms.len());
        for (w, e) in terms {
            if *w <= 1e-15 {
                continue;
            }
            let columns = (0..4)
                .map(|ab| {
                    let input = PureState::basis(vec![2, 2], ab).expect("two-qubit basis");
                    reorder.mat_vec(&kron_vec(input.amplitudes(), e.amplitudes()))
                })
                .collect::<Result<Vec<_>>>()?;
            arranged.push((w.sqrt(), columns));
        }
        let basis = BellIndex::ALL
            .iter()
            .flat_map(|&l| {
                BellIndex::ALL.iter().map(move |&l2| kron_vec(bell_state(l).amplitudes(), bell_state(l2).amplitudes()))
            })
            .collect();
        Ok(Self { arranged, basis })
    }

    fn channel(&self, outcome: MeasurementOutcome) -> Result<KrausChannel> {
        let p = bell_projectors();
        let measured = p[outcome.i.slot()].kron(&p[outcome.i_prime.slot()]);
        let mut ops = Vec::new();
        for bra in &self.basis {
            // (Pi_i (x) Pi_i')|P_l P_l'>
            let row = measured.mat_vec(bra)?;
            if row.iter().all(|z| z.norm() < 1e-15) {
                continue;
            }
            for (amp, columns) in &self.arranged {
                let mut a = ComplexMatrix::zeros(4, 4);
                for (ab, v) in columns.iter().enumerate() {
                    for df in 0..4 {
                        let z: C64 = row.iter().enumerate().map(|(m, r)| r.conj() * v[m * 4 + df]).sum();
                        a[(df, ab)] = z * (4.0 * amp);
                    }
                }
                ops.push(a);
            }
        }
        finish_channel(ops, 4)
    }
}

/// Which of the four probability expressions an outcome belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityFamily {
    /// i = i'
    Pi11,
    /// (1,2), (2,1), (3,4), (4,3)
    Pi12,
    /// (1,3), (2,4), (3,1), (4,2)
    Pi13,
    /// (1,4), (2,3), (3,2), (4,1)
    Pi14,
}

impl ProbabilityFamily {
    pub fn of(outcome: MeasurementOutcome) -> Self {
        match outcome.i.slot() ^ outcome.i_prime.slot() {
            0 => ProbabilityFamily::Pi11,
            1 => ProbabilityFamily::Pi12,
            2 => ProbabilityFamily::Pi13,
            _ => ProbabilityFamily::Pi14,
        }
    }
}

/// pi_{ii'} for the correlated resource as a function of the diagonal
/// two-body correlations c11, c22, c33 of the input.
pub fn pi_closed_form(q: &[f64; 4], family: ProbabilityFamily, c: &BlochCoefficients) -> f64 {
    let s = q.map(f64::sqrt);
    let x = 2.0 * (s[0] * s[2] + s[1] * s[3]) * c.c[0][0];
    let y = 2.0 * (s[0] * s[3] + s[1] * s[2]) * c.c[1][1];
    let z = 2.0 * (s[0] * s[1] + s[2] * s[3]) * c.c[2][2];
    match family {
        ProbabilityFamily::Pi11 => 1.0 + x - y + z,
        ProbabilityFamily::Pi12 => 1.0 - x + y + z,
        ProbabilityFamily::Pi13 => 1.0 + x + y - z,
        ProbabilityFamily::Pi14 => 1.0 - x - y - z,
    }
}

/// Closed-form outcome probability: 1/16 for the uncorrelated resource,
/// pi_{ii'}/16 for the correlated one.
pub fn probability_closed_form(spec: &ResourceSpec, outcome: MeasurementOutcome, c: &BlochCoefficients) -> f64 {
    match spec.kind() {
        Correlation::Uncorrelated => 1.0 / 16.0,
        Correlation::Correlated => pi_closed_form(&spec.q(), ProbabilityFamily::of(outcome), c) / 16.0,
    }
}
