//! Pauli-pair reversal search, averaged maximum fidelity, entanglement of
//! the reversed teleported state, and the closed forms they are compared to.

use std::fmt;

use crate::channels::KrausChannel;
use crate::error::{QError, Result};
use crate::exec::Execution;
use crate::qmath::{ComplexMatrix, DensityMatrix, Pauli};
use crate::states::{input_state, negativity, Correlation, MeasurementOutcome, ResourceSpec, WernerParam};
use crate::teleport::{extract_term_kraus, simulate_double_with};
use crate::tolerances::Tolerances;

/// Index order used for reversal candidates.
pub const REVERSAL_PAULIS: [Pauli; 4] = [Pauli::I, Pauli::Z, Pauli::X, Pauli::Y];

/// Candidate reversal U_first (x) U_second, indices into [`REVERSAL_PAULIS`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliPair {
    first: u8,
    second: u8,
}

impl PauliPair {
    pub fn new(first: usize, second: usize) -> Result<Self> {
        for idx in [first, second] {
            if idx > 3 {
                return Err(QError::InvalidPauliIndex(idx));
            }
        }
        Ok(Self { first: first as u8, second: second as u8 })
    }

    /// All 16 pairs in lexicographic order.
    pub fn all() -> [PauliPair; 16] {
        std::array::from_fn(|n| PauliPair { first: (n / 4) as u8, second: (n % 4) as u8 })
    }

    pub fn first(self) -> usize {
        self.first as usize
    }

    pub fn second(self) -> usize {
        self.second as usize
    }

    pub fn paulis(self) -> (Pauli, Pauli) {
        (REVERSAL_PAULIS[self.first()], REVERSAL_PAULIS[self.second()])
    }

    pub fn unitary(self) -> ComplexMatrix {
        let (a, b) = self.paulis();
        a.matrix().kron(&b.matrix())
    }

    pub fn channel(self) -> KrausChannel {
        KrausChannel::unitary(self.unitary()).expect("Pauli products are unitary")
    }
}

impl fmt::Display for PauliPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.paulis();
        write!(f, "{}{}", a.symbol(), b.symbol())
    }
}

fn check_pure_two_qubit(reference: &DensityMatrix) -> Result<()> {
    if reference.dims() != [2, 2] {
        return Err(QError::DimensionMismatch {
            expected: "dims [2, 2]".into(),
            actual: format!("{:?}", reference.dims()),
        });
    }
    let purity = reference.purity();
    if (purity - 1.0).abs() > Tolerances::DEFAULT.trace {
        return Err(QError::InvalidState(format!("reference state is not pure (purity {purity})")));
    }
    Ok(())
}

fn overlap(reference: &ComplexMatrix, state: &ComplexMatrix) -> f64 {
    let n = reference.rows();
    (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| (reference[(r, c)] * state[(c, r)]).re).sum()
}

/// Best Pauli-pair correction of `state` towards the pure `reference`.
/// Ties within `fidelity_tie` keep the lexicographically smaller pair.
pub fn best_reversal(state: &DensityMatrix, reference: &DensityMatrix) -> Result<(PauliPair, f64)> {
    check_pure_two_qubit(reference)?;
    if state.dims() != reference.dims() {
        return Err(QError::DimensionMismatch {
            expected: format!("{:?}", reference.dims()),
            actual: format!("{:?}", state.dims()),
        });
    }
    let mut fidelities = [0.0; 16];
    for (f, pair) in fidelities.iter_mut().zip(PauliPair::all()) {
        *f = overlap(reference.matrix(), &pair.unitary().conjugate(state.matrix())?);
    }
    let n = select_best(&fidelities);
    Ok((PauliPair::all()[n], fidelities[n]))
}

/// Index of the largest value; a later entry wins only if it exceeds the
/// current best by more than `fidelity_tie`.
pub fn select_best(values: &[f64]) -> usize {
    let tie = Tolerances::DEFAULT.fidelity_tie;
    let mut best = 0;
    for (n, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] + tie {
            best = n;
        }
    }
    best
}

/// Optimal reversal of `channel` for the pure input `input`; the channel
/// output is renormalized before the search.
pub fn optimal_reversal(channel: &KrausChannel, input: &DensityMatrix) -> Result<(PauliPair, f64)> {
    check_pure_two_qubit(input)?;
    let (output, _) = channel.apply(input)?;
    best_reversal(&output, input)
}

/// The reversed output state R(E(rho)) for a chosen pair.
pub fn reversed_state(state: &DensityMatrix, pair: PauliPair) -> Result<DensityMatrix> {
    state.conjugated_by(&pair.unitary())
}

#[derive(Debug, Clone)]
pub struct OutcomeFidelity {
    pub outcome: MeasurementOutcome,
    pub pair: PauliPair,
    pub fidelity: f64,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct FidelityReport {
    pub per_outcome: Vec<OutcomeFidelity>,
    pub averaged_fmax: f64,
    pub closed_form_fmax: f64,
    pub discrepancy: f64,
    /// For the correlated resource: the same average computed from the
    /// term-by-term Kraus expansion of the resource.
    pub term_split_fmax: Option<f64>,
}

/// Averaged maximum fidelity over all 16 outcomes for the input family
/// cos(theta)|00> + sin(theta)|11>.
pub fn averaged_fmax(spec: &ResourceSpec, theta: f64) -> Result<FidelityReport> {
    averaged_fmax_with(spec, theta, Execution::default())
}

pub fn averaged_fmax_with(spec: &ResourceSpec, theta: f64, exec: Execution) -> Result<FidelityReport> {
    let input = input_state(theta);
    let records = simulate_double_with(&input, spec, exec)?;
    let min_weight = Tolerances::DEFAULT.min_weight;
    let per_outcome = exec.try_map(&records, |r| {
        let (pair, fidelity) = if r.probability < min_weight {
            (PauliPair::default(), 0.0)
        } else {
            optimal_reversal(&r.extracted_channel, &input)?
        };
        Ok::<_, QError>(OutcomeFidelity { outcome: r.outcome, pair, fidelity, probability: r.probability })
    })?;
    let averaged_fmax = per_outcome.iter().map(|o| o.probability * o.fidelity).sum();
    let closed_form_fmax = closed_form_fmax(spec, theta);
    let term_split_fmax = match spec.kind() {
        Correlation::Correlated => Some(term_split_average(spec, &input, exec)?),
        Correlation::Uncorrelated => None,
    };
    Ok(FidelityReport {
        per_outcome,
        averaged_fmax,
        closed_form_fmax,
        discrepancy: (averaged_fmax - closed_form_fmax).abs(),
        term_split_fmax,
    })
}

fn term_split_average(spec: &ResourceSpec, input: &DensityMatrix, exec: Execution) -> Result<f64> {
    let parts = exec.try_map(&MeasurementOutcome::all(), |&outcome| {
        let channel = extract_term_kraus(spec, outcome)?;
        let (output, weight) = channel.apply(input)?;
        let (_, f) = best_reversal(&output, input)?;
        Ok::<_, QError>(weight / 16.0 * f)
    })?;
    Ok(parts.iter().sum())
}

/// Closed form applicable to `spec`: the correlated expression, the Werner
/// expression when the spectrum came from a Werner parameter, otherwise the
/// literal six-branch maximum.
pub fn closed_form_fmax(spec: &ResourceSpec, theta: f64) -> f64 {
    match (spec.kind(), spec.phi()) {
        (Correlation::Correlated, _) => fmax_correlated_closed(&spec.q(), theta),
        (Correlation::Uncorrelated, Some(phi)) => fmax_werner_closed(WernerParam::new(phi).expect("validated"), theta),
        (Correlation::Uncorrelated, None) => fmax_uncorrelated_closed(&spec.q(), theta),
    }
}

fn sin2_sq(theta: f64) -> f64 {
    let s = (2.0 * theta).sin();
    s * s
}

/// The six branches of the closed-form maximum fidelity for the
/// uncorrelated resource.
pub fn fidelity_branches(q: &[f64; 4], theta: f64) -> [f64; 6] {
    let [q1, q2, q3, q4] = *q;
    let s = sin2_sq(theta);
    let a = q1 + q2;
    let b = q3 + q4;
    let u = q1 * q1 - 2.0 * q3 * q4 + q2 * q2;
    let v = q3 * q3 - 2.0 * q1 * q2 + q4 * q4;
    let w = (q1 - q2) * (q3 - q4);
    [a * a + u * s, a * a + v * s, b * b + v * s, b * b + u * s, a * b + w * s, a * b - w * s]
}

/// Literal maximum over [`fidelity_branches`]; not clamped to 1.
pub fn fmax_uncorrelated_closed(q: &[f64; 4], theta: f64) -> f64 {
    fidelity_branches(q, theta).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// (1/9)[(2+phi)^2 - (1-phi)(1+2phi) sin^2 2theta]
pub fn fmax_werner_closed(phi: WernerParam, theta: f64) -> f64 {
    let p = phi.phi();
    ((2.0 + p).powi(2) - (1.0 - p) * (1.0 + 2.0 * p) * sin2_sq(theta)) / 9.0
}

/// max((q1+q2) + (q3+q4) sin^2 2theta, (q3+q4) + (q1+q2) sin^2 2theta)
pub fn fmax_correlated_closed(q: &[f64; 4], theta: f64) -> f64 {
    let s = sin2_sq(theta);
    let a = q[0] + q[1];
    let b = q[2] + q[3];
    (a + b * s).max(b + a * s)
}

/// Entanglement of the reversed Werner-family output, reading the
/// -2(2-phi-phi^2) term inside the 1/9 bracket.
pub fn werner_negativity_inside(phi: WernerParam, theta: f64) -> f64 {
    let p = phi.phi();
    (((1.0 + 2.0 * p).powi(2) * (2.0 * theta).sin() - 2.0 * (2.0 - p - p * p)) / 9.0).max(0.0)
}

/// Same expression with the -2(2-phi-phi^2) term outside the bracket.
pub fn werner_negativity_outside(phi: WernerParam, theta: f64) -> f64 {
    let p = phi.phi();
    ((1.0 + 2.0 * p).powi(2) * (2.0 * theta).sin() / 9.0 - 2.0 * (2.0 - p - p * p)).max(0.0)
}

/// Which Kraus model of the resource drives the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    /// Channel extracted from the full resource state.
    Exact,
    /// Each Bell-pair term of the resource contributes separately.
    TermSplit,
}

#[derive(Debug, Clone)]
pub struct OutcomeEntanglement {
    pub outcome: MeasurementOutcome,
    pub pair: PauliPair,
    pub probability: f64,
    pub negativity: f64,
}

#[derive(Debug, Clone)]
pub struct EntanglementReport {
    pub per_outcome: Vec<OutcomeEntanglement>,
    /// Probability-weighted mean negativity.
    pub average: f64,
    pub input_negativity: f64,
}

/// Negativity of the optimally reversed teleported state, per outcome.
pub fn teleported_entanglement(spec: &ResourceSpec, theta: f64, model: ChannelModel) -> Result<EntanglementReport> {
    teleported_entanglement_with(spec, theta, model, Execution::default())
}

pub fn teleported_entanglement_with(
    spec: &ResourceSpec,
    theta: f64,
    model: ChannelModel,
    exec: Execution,
) -> Result<EntanglementReport> {
    let input = input_state(theta);
    let min_weight = Tolerances::DEFAULT.min_weight;
    let channels: Vec<(MeasurementOutcome, KrausChannel)> = match model {
        ChannelModel::Exact => {
            simulate_double_with(&input, spec, exec)?.into_iter().map(|r| (r.outcome, r.extracted_channel)).collect()
        }
        ChannelModel::TermSplit => {
            exec.try_map(&MeasurementOutcome::all(), |&o| Ok::<_, QError>((o, extract_term_kraus(spec, o)?)))?
        }
    };
    let per_outcome = exec.try_map(&channels, |(outcome, channel)| {
        let unnormalized = channel.apply_unnormalized(input.matrix())?;
        let probability = unnormalized.trace().re / 16.0;
        if probability < min_weight {
            return Ok(OutcomeEntanglement {
                outcome: *outcome,
                pair: PauliPair::default(),
                probability,
                negativity: 0.0,
            });
        }
        let (output, _) = channel.apply(&input)?;
        let (pair, _) = best_reversal(&output, &input)?;
        let negativity = negativity(&reversed_state(&output, pair)?, 1)?;
        Ok::<_, QError>(OutcomeEntanglement { outcome: *outcome, pair, probability, negativity })
    })?;
    let average = per_outcome.iter().map(|o| o.probability * o.negativity).sum();
    Ok(EntanglementReport { per_outcome, average, input_negativity: negativity(&input, 1)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{compose, uncorrelated_channel};
    use crate::states::{fidelity_pure, input_pure};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn werner(phi: f64) -> ResourceSpec {
        ResourceSpec::werner(Correlation::Uncorrelated, WernerParam::new(phi).unwrap())
    }

    #[test]
    fn pairs_are_distinct_unitaries() {
        let all = PauliPair::all();
        for (n, a) in all.iter().enumerate() {
            assert!(a.channel().completeness_defect() < 1e-12);
            for b in &all[n + 1..] {
                assert!(a < b);
                assert!(a.unitary().max_abs_diff(&b.unitary()) > 0.5);
            }
        }
        assert_eq!(PauliPair::new(2, 3).unwrap().to_string(), "XY");
        assert!(PauliPair::new(4, 0).is_err());
    }

    #[test]
    fn inverts_a_unitary_channel() {
        let pair = PauliPair::new(2, 3).unwrap();
        let input = input_state(0.3);
        let (found, f) = optimal_reversal(&pair.channel(), &input).unwrap();
        assert_eq!(found, pair);
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_channel_keeps_identity_pair() {
        let (found, f) = optimal_reversal(&KrausChannel::identity(4), &input_state(0.7)).unwrap();
        assert_eq!(found, PauliPair::default());
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ties_pick_lowest_pair() {
        let (found, _) = optimal_reversal(&KrausChannel::identity(4), &input_state(0.0)).unwrap();
        assert_eq!(found, PauliPair::default());
    }

    #[test]
    fn rejects_mixed_reference() {
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!(optimal_reversal(&KrausChannel::identity(4), &mixed).is_err());
    }

    #[test]
    fn composition_matches_direct_search() {
        let q = [0.5, 0.2, 0.2, 0.1];
        let outcome = MeasurementOutcome::new(1, 1).unwrap();
        let channel = uncorrelated_channel(&q, outcome).unwrap();
        let input = input_state(0.4);
        let (pair, f) = optimal_reversal(&channel, &input).unwrap();
        let composed = compose(&pair.channel(), &channel).unwrap();
        let (out, _) = composed.apply(&input).unwrap();
        assert_abs_diff_eq!(fidelity_pure(&input_pure(0.4), &out).unwrap(), f, epsilon = 1e-12);
    }

    #[test]
    fn werner_closed_form_values() {
        let w = |p| WernerParam::new(p).unwrap();
        assert_abs_diff_eq!(fmax_werner_closed(w(1.0), 0.37), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fmax_werner_closed(w(0.0), 0.0), 4.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fmax_werner_closed(w(0.5), FRAC_PI_4), 7.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fmax_werner_closed(w(0.0), FRAC_PI_4), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn werner_is_the_fourth_branch() {
        for n in 0..=10 {
            let phi = WernerParam::new(n as f64 / 10.0).unwrap();
            for t in 0..5 {
                let theta = t as f64 * std::f64::consts::PI / 16.0;
                let branches = fidelity_branches(&phi.spectrum(), theta);
                assert_abs_diff_eq!(branches[3], fmax_werner_closed(phi, theta), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn literal_max_exceeds_one_for_noiseless_resource() {
        assert_abs_diff_eq!(fmax_uncorrelated_closed(&[1.0, 0.0, 0.0, 0.0], FRAC_PI_4), 2.0, epsilon = 1e-15);
        let q = [0.4, 0.2, 0.3, 0.1];
        assert_abs_diff_eq!(fmax_uncorrelated_closed(&q, 0.0), 0.36, epsilon = 1e-15);
    }

    #[test]
    fn correlated_closed_form_values() {
        let q = [0.4, 0.2, 0.3, 0.1];
        assert_abs_diff_eq!(fmax_correlated_closed(&q, 0.0), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(fmax_correlated_closed(&q, FRAC_PI_4), 1.0, epsilon = 1e-15);
        let mut last = 0.0;
        for t in 0..=20 {
            let f = fmax_correlated_closed(&q, t as f64 * FRAC_PI_4 / 20.0);
            assert!(f >= last - 1e-15);
            last = f;
        }
    }

    #[test]
    fn bracket_readings() {
        let w = WernerParam::new(0.9).unwrap();
        assert_abs_diff_eq!(werner_negativity_inside(w, FRAC_PI_4), 121.0 / 150.0, epsilon = 1e-12);
        assert_abs_diff_eq!(werner_negativity_outside(w, FRAC_PI_4), 131.0 / 450.0, epsilon = 1e-12);
        assert_eq!(werner_negativity_inside(WernerParam::new(0.3).unwrap(), FRAC_PI_4), 0.0);
    }

    #[test]
    fn noiseless_resource_is_perfect() {
        let spec = ResourceSpec::new(Correlation::Uncorrelated, [1.0, 0.0, 0.0, 0.0]).unwrap();
        let report = averaged_fmax(&spec, 0.6).unwrap();
        assert_abs_diff_eq!(report.averaged_fmax, 1.0, epsilon = 1e-10);
        assert!(report.closed_form_fmax > 1.0);
    }

    #[test]
    fn werner_average_matches_closed_form() {
        let report = averaged_fmax(&werner(0.5), FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(report.averaged_fmax, 7.0 / 12.0, epsilon = 1e-9);
        assert!(report.discrepancy < 1e-9);
        let parts: f64 = report.per_outcome.iter().map(|o| o.probability * o.fidelity).sum();
        assert_abs_diff_eq!(parts, report.averaged_fmax, epsilon = 1e-12);
    }

    #[test]
    fn fully_depolarized_output_cannot_be_corrected() {
        let outcome = MeasurementOutcome::new(3, 2).unwrap();
        let channel = uncorrelated_channel(&[0.25; 4], outcome).unwrap();
        let (pair, f) = optimal_reversal(&channel, &input_state(0.3)).unwrap();
        assert_eq!(pair, PauliPair::default());
        assert_abs_diff_eq!(f, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn werner_noiseless_keeps_entanglement() {
        let report = teleported_entanglement(&werner(1.0), 0.3, ChannelModel::Exact).unwrap();
        for o in &report.per_outcome {
            assert_abs_diff_eq!(o.negativity, (0.6f64).sin(), epsilon = 1e-10);
        }
        assert_abs_diff_eq!(report.input_negativity, (0.6f64).sin(), epsilon = 1e-12);
    }
}
