use std::f64::consts::PI;

use qtele_core::channels::{
    choi_distance, choi_distance_normalized, correlated_channel, correlated_coherent_channel, teleport_operator,
    uncorrelated_channel, Completeness, KrausChannel,
};
use qtele_core::qmath::{bloch_coefficients, c, ComplexMatrix, DensityMatrix};
use qtele_core::reversal::{
    averaged_fmax, fidelity_branches, fmax_correlated_closed, fmax_uncorrelated_closed, teleported_entanglement,
    werner_negativity_inside, werner_negativity_outside, ChannelModel,
};
use qtele_core::states::{bell_diagonal, input_state, Correlation, ResourceSpec, WernerParam};
use qtele_core::teleport::{
    extract_kraus, extract_term_kraus, probability_closed_form, simulate_double, simulate_single,
};
use qtele_core::{BellIndex, Execution, MeasurementOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Resolved;
use crate::error::CliError;
use crate::report::{Expect, Params, ReportRow};

pub struct Defaults {
    pub q: Option<[f64; 4]>,
    pub phi: Option<Vec<f64>>,
    pub theta: Vec<f64>,
    pub samples: usize,
}

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    /// Resource kind the experiment is tied to, if any.
    pub kind: Option<Correlation>,
    pub defaults: fn() -> Defaults,
    run: fn(&Resolved) -> Result<Vec<ReportRow>, CliError>,
}

impl std::fmt::Debug for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

impl Experiment {
    pub fn run(&self, resolved: &Resolved) -> Result<Vec<ReportRow>, CliError> {
        (self.run)(resolved)
    }
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

pub static EXPERIMENTS: [Experiment; 11] = [
    Experiment {
        name: "probabilities-uncorrelated",
        description: "outcome probabilities with independent noise on both pairs vs 1/16",
        kind: Some(Correlation::Uncorrelated),
        defaults: || Defaults { q: None, phi: None, theta: theta_grid(4, 16.0), samples: 3 },
        run: probabilities,
    },
    Experiment {
        name: "probabilities-correlated",
        description: "outcome probabilities with correlated noise vs pi_ii'/16",
        kind: Some(Correlation::Correlated),
        defaults: || Defaults { q: None, phi: None, theta: theta_grid(4, 16.0), samples: 3 },
        run: probabilities,
    },
    Experiment {
        name: "kraus-eq15",
        description: "extracted channel vs the 16-operator Pauli-pair set, all outcomes",
        kind: Some(Correlation::Uncorrelated),
        defaults: || Defaults { q: None, phi: None, theta: vec![], samples: 3 },
        run: kraus_uncorrelated,
    },
    Experiment {
        name: "kraus-eq25",
        description: "extracted correlated channel vs {sqrt(q_k) s_k (x) s_k} and the coherent operator",
        kind: Some(Correlation::Correlated),
        defaults: || Defaults { q: None, phi: None, theta: vec![], samples: 3 },
        run: kraus_correlated,
    },
    Experiment {
        name: "eq18-compare",
        description: "averaged maximum fidelity vs the literal six-branch closed form",
        kind: Some(Correlation::Uncorrelated),
        defaults: || Defaults { q: Some([1.0, 0.0, 0.0, 0.0]), phi: None, theta: theta_grid(4, 16.0), samples: 1 },
        run: six_branch_compare,
    },
    Experiment {
        name: "eq19-sweep",
        description: "Werner-family averaged maximum fidelity over a phi x theta grid",
        kind: Some(Correlation::Uncorrelated),
        defaults: || Defaults {
            q: None,
            phi: Some((0..=10).map(|n| n as f64 / 10.0).collect()),
            theta: theta_grid(4, 16.0),
            samples: 1,
        },
        run: werner_fidelity_sweep,
    },
    Experiment {
        name: "eq20-adjudicate",
        description: "reversed-output negativity vs both bracket readings of the Werner entanglement formula",
        kind: Some(Correlation::Uncorrelated),
        defaults: || Defaults { q: None, phi: Some(vec![0.3, 0.6, 0.9]), theta: vec![PI / 4.0], samples: 1 },
        run: bracket_adjudicate,
    },
    Experiment {
        name: "eq28-sweep",
        description: "correlated-family averaged maximum fidelity vs its closed form",
        kind: Some(Correlation::Correlated),
        defaults: || Defaults { q: None, phi: None, theta: theta_grid(4, 16.0), samples: 3 },
        run: correlated_fidelity_sweep,
    },
    Experiment {
        name: "eq29-entanglement",
        description: "correlated-family reversed-output negativity vs sin 2theta, every outcome",
        kind: Some(Correlation::Correlated),
        defaults: || Defaults { q: None, phi: None, theta: theta_grid(8, 32.0), samples: 3 },
        run: correlated_entanglement,
    },
    Experiment {
        name: "oracle-closure",
        description: "extracted Kraus channels reproduce the simulated conditional states",
        kind: None,
        defaults: || Defaults { q: None, phi: None, theta: vec![0.3], samples: 3 },
        run: oracle_closure,
    },
    Experiment {
        name: "single-qubit-scheme",
        description: "one-pair teleportation through a Bell-diagonal resource vs the Pauli channel",
        kind: None,
        defaults: || Defaults { q: None, phi: None, theta: vec![], samples: 3 },
        run: single_qubit_scheme,
    },
];

fn theta_grid(steps: usize, denom: f64) -> Vec<f64> {
    (0..=steps).map(|n| n as f64 * PI / denom).collect()
}

fn rng(res: &Resolved) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(res.seed)
}

fn random_spectrum(rng: &mut impl Rng) -> [f64; 4] {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.01..1.0));
    let total: f64 = raw.iter().sum();
    raw.map(|x| x / total)
}

/// Spectra to run over: Werner spectra for each phi, the configured q, or
/// `samples` spectra drawn from the seed.
fn spectra(res: &Resolved) -> Vec<(Option<f64>, [f64; 4])> {
    if let Some(phis) = &res.phi {
        return phis.iter().map(|&p| (Some(p), WernerParam::new(p).expect("validated").spectrum())).collect();
    }
    if let Some(q) = res.q {
        return vec![(None, q)];
    }
    let mut r = rng(res);
    (0..res.samples).map(|_| (None, random_spectrum(&mut r))).collect()
}

fn spec_for(res: &Resolved, phi: Option<f64>, q: [f64; 4]) -> Result<ResourceSpec, CliError> {
    Ok(match phi {
        Some(p) => ResourceSpec::werner(res.kind, WernerParam::new(p)?),
        None => ResourceSpec::new(res.kind, q)?,
    })
}

fn params(res: &Resolved, phi: Option<f64>, q: [f64; 4], theta: Option<f64>) -> Params {
    Params { kind: res.kind.name(), q: Some(q), phi, theta, outcome: None }
}

fn outcome_label(o: MeasurementOutcome) -> String {
    format!("{}-{}", o.i.value(), o.i_prime.value())
}

/// Evaluates `f` at every (spectrum, theta) point in order.
fn over_grid(
    res: &Resolved,
    f: impl Fn(Option<f64>, [f64; 4], f64) -> Result<Vec<ReportRow>, CliError> + Sync + Send,
) -> Result<Vec<ReportRow>, CliError> {
    let points: Vec<(Option<f64>, [f64; 4], f64)> =
        spectra(res).into_iter().flat_map(|(phi, q)| res.theta.iter().map(move |&t| (phi, q, t))).collect();
    let rows = Execution::default().try_map(&points, |&(phi, q, theta)| f(phi, q, theta))?;
    Ok(rows.into_iter().flatten().collect())
}

fn over_spectra(
    res: &Resolved,
    f: impl Fn(Option<f64>, [f64; 4]) -> Result<Vec<ReportRow>, CliError> + Sync + Send,
) -> Result<Vec<ReportRow>, CliError> {
    let rows = Execution::default().try_map(&spectra(res), |&(phi, q)| f(phi, q))?;
    Ok(rows.into_iter().flatten().collect())
}

fn probabilities(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let spec = spec_for(res, phi, q)?;
        let input = input_state(theta);
        let bloch = bloch_coefficients(&input)?;
        let mut rows = Vec::new();
        let mut total = 0.0;
        for rec in simulate_double(&input, &spec)? {
            total += rec.probability;
            let mut p = params(res, phi, q, Some(theta));
            p.outcome = Some(outcome_label(rec.outcome));
            let closed = probability_closed_form(&spec, rec.outcome, &bloch);
            let tol = if res.kind == Correlation::Uncorrelated { 1e-12 } else { 1e-10 };
            rows.push(ReportRow::new(name, &p, "probability", rec.probability, closed, tol, Expect::Agree));
        }
        rows.push(ReportRow::new(
            name,
            &params(res, phi, q, Some(theta)),
            "probability_sum",
            total,
            1.0,
            1e-10,
            Expect::Agree,
        ));
        Ok(rows)
    })
}

fn kraus_uncorrelated(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_spectra(res, |phi, q| {
        let spec = spec_for(res, phi, q)?;
        let mut rows = Vec::new();
        for outcome in MeasurementOutcome::all() {
            let mut p = params(res, phi, q, None);
            p.outcome = Some(outcome_label(outcome));
            let extracted = extract_kraus(&spec, outcome)?;
            let closed = uncorrelated_channel(&q, outcome)?;
            rows.push(ReportRow::new(
                name,
                &p,
                "choi_distance",
                choi_distance(&extracted, &closed),
                0.0,
                1e-10,
                Expect::Agree,
            ));
            rows.push(ReportRow::new(
                name,
                &p,
                "completeness_defect",
                extracted.completeness_defect(),
                0.0,
                1e-10,
                Expect::Agree,
            ));
        }
        Ok(rows)
    })
}

fn kraus_correlated(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_spectra(res, |phi, q| {
        let spec = spec_for(res, phi, q)?;
        let mut rows = Vec::new();
        for outcome in MeasurementOutcome::all() {
            let mut p = params(res, phi, q, None);
            p.outcome = Some(outcome_label(outcome));
            let exact = extract_kraus(&spec, outcome)?;
            let split = extract_term_kraus(&spec, outcome)?;
            let literal = correlated_channel(&q, outcome)?;
            let coherent = correlated_coherent_channel(&q, outcome)?;
            let tol = 1e-10;
            rows.push(ReportRow::new(
                name,
                &p,
                "choi_normalized_exact",
                choi_distance_normalized(&exact, &literal),
                0.0,
                tol,
                Expect::Agree,
            ));
            rows.push(ReportRow::new(
                name,
                &p,
                "choi_exact_vs_coherent",
                choi_distance(&exact, &coherent),
                0.0,
                tol,
                Expect::Agree,
            ));
            rows.push(ReportRow::new(
                name,
                &p,
                "choi_term_split",
                choi_distance(&split, &literal),
                0.0,
                tol,
                Expect::Agree,
            ));
        }
        Ok(rows)
    })
}

fn six_branch_compare(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let spec = spec_for(res, phi, q)?;
        let numerical = averaged_fmax(&spec, theta)?.averaged_fmax;
        let literal = fmax_uncorrelated_closed(&q, theta);
        let p = params(res, phi, q, Some(theta));
        let tol = 1e-9;
        let expect = if literal > 1.0 + tol { Expect::Disagree } else { Expect::Agree };
        let mut rows = vec![ReportRow::new(name, &p, "fmax_vs_literal_max", numerical, literal, tol, expect)];
        if phi.is_some() {
            let branch = fidelity_branches(&q, theta)[3];
            rows.push(ReportRow::new(name, &p, "fmax_vs_werner_branch", numerical, branch, tol, Expect::Agree));
        }
        Ok(rows)
    })
}

fn werner_fidelity_sweep(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let spec = spec_for(res, phi, q)?;
        let report = averaged_fmax(&spec, theta)?;
        let p = params(res, phi, q, Some(theta));
        Ok(vec![ReportRow::new(name, &p, "fmax", report.averaged_fmax, report.closed_form_fmax, 1e-9, Expect::Agree)])
    })
}

fn bracket_adjudicate(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let Some(phi) = phi else {
            return Err(CliError::Config("this experiment needs resource.phi".into()));
        };
        let report = teleported_entanglement(&spec_for(res, Some(phi), q)?, theta, ChannelModel::Exact)?;
        let w = WernerParam::new(phi)?;
        let (inside, outside) = (werner_negativity_inside(w, theta), werner_negativity_outside(w, theta));
        let spread = report.per_outcome.iter().map(|o| (o.negativity - report.average).abs()).fold(0.0, f64::max);
        let p = params(res, Some(phi), q, Some(theta));
        let tol = 1e-9;
        let outside_expect = if (inside - outside).abs() > tol { Expect::Disagree } else { Expect::Agree };
        Ok(vec![
            ReportRow::new(name, &p, "negativity_vs_inside", report.average, inside, tol, Expect::Agree),
            ReportRow::new(name, &p, "negativity_vs_outside", report.average, outside, tol, outside_expect),
            ReportRow::new(name, &p, "outcome_spread", spread, 0.0, tol, Expect::Agree),
        ])
    })
}

fn correlated_fidelity_sweep(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let spec = spec_for(res, phi, q)?;
        let report = averaged_fmax(&spec, theta)?;
        let closed = fmax_correlated_closed(&spec.q(), theta);
        let p = params(res, phi, q, Some(theta));
        let split = report.term_split_fmax.expect("correlated resource");
        Ok(vec![
            ReportRow::new(name, &p, "fmax_exact", report.averaged_fmax, closed, 1e-9, Expect::Agree),
            ReportRow::new(name, &p, "fmax_term_split", split, closed, 1e-9, Expect::Agree),
        ])
    })
}

fn correlated_entanglement(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let spec = spec_for(res, phi, q)?;
        let target = (2.0 * theta).sin();
        let mut rows = Vec::new();
        for (model, quantity) in
            [(ChannelModel::Exact, "negativity_exact"), (ChannelModel::TermSplit, "negativity_term_split")]
        {
            for o in teleported_entanglement(&spec, theta, model)?.per_outcome {
                let mut p = params(res, phi, q, Some(theta));
                p.outcome = Some(outcome_label(o.outcome));
                rows.push(ReportRow::new(name, &p, quantity, o.negativity, target, 1e-10, Expect::Agree));
            }
        }
        Ok(rows)
    })
}

fn oracle_closure(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    over_grid(res, |phi, q, theta| {
        let spec = spec_for(res, phi, q)?;
        let input = input_state(theta);
        let mut rows = Vec::new();
        for rec in simulate_double(&input, &spec)? {
            let mut p = params(res, phi, q, Some(theta));
            p.outcome = Some(outcome_label(rec.outcome));
            let distance = match &rec.conditional_state {
                Some(state) => rec.extracted_channel.apply(&input)?.0.distance(state),
                None => rec.extracted_channel.apply_unnormalized(input.matrix())?.max_abs(),
            };
            rows.push(ReportRow::new(name, &p, "state_distance", distance, 0.0, 1e-10, Expect::Agree));
            let weight = rec.extracted_channel.apply_unnormalized(input.matrix())?.trace().re / 16.0;
            rows.push(ReportRow::new(name, &p, "weight_vs_probability", weight, rec.probability, 1e-12, Expect::Agree));
        }
        Ok(rows)
    })
}

fn random_qubit_state(rng: &mut impl Rng) -> Result<DensityMatrix, CliError> {
    let g = ComplexMatrix::from_fn(2, 2, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    Ok(DensityMatrix::new(vec![2], m.scale_real(1.0 / t))?)
}

fn single_qubit_scheme(res: &Resolved) -> Result<Vec<ReportRow>, CliError> {
    let name = res.experiment.name;
    let mut r = rng(res);
    let cases: Vec<(Option<f64>, [f64; 4], DensityMatrix)> = spectra(res)
        .into_iter()
        .map(|(phi, q)| Ok((phi, q, random_qubit_state(&mut r)?)))
        .collect::<Result<_, CliError>>()?;
    let rows = Execution::default().try_map(&cases, |(phi, q, rho)| {
        let records = simulate_single(rho, &bell_diagonal(q)?)?;
        let mut rows = Vec::new();
        for rec in records {
            let closed = KrausChannel::new(
                BellIndex::ALL
                    .iter()
                    .map(|&k| teleport_operator(rec.outcome, k).scale_real(q[k.slot()].sqrt()))
                    .collect(),
                Completeness::TracePreserving,
            )?;
            let (expected, _) = closed.apply(rho)?;
            let p = Params {
                kind: "single",
                q: Some(*q),
                phi: *phi,
                theta: None,
                outcome: Some(rec.outcome.value().to_string()),
            };
            let state = rec.conditional_state.as_ref().expect("every outcome has probability 1/4");
            rows.push(ReportRow::new(name, &p, "probability", rec.probability, 0.25, 1e-12, Expect::Agree));
            rows.push(ReportRow::new(name, &p, "state_distance", state.distance(&expected), 0.0, 1e-10, Expect::Agree));
            rows.push(ReportRow::new(
                name,
                &p,
                "choi_distance",
                choi_distance(&rec.extracted_channel, &closed),
                0.0,
                1e-10,
                Expect::Agree,
            ));
        }
        Ok::<_, CliError>(rows)
    })?;
    Ok(rows.into_iter().flatten().collect())
}
