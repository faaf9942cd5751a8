//! Acceptance criteria, one line per criterion. Diagnostics follow on
//! indented lines. Exits non-zero if any criterion fails.

mod common;

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{random_density, random_qubit_unitary, random_spectrum, rng, theta_grid};
use qtele_core::channels::{
    choi_distance, choi_distance_normalized, correlated_channel, pauli_channel, uncorrelated_channel,
};
use qtele_core::qmath::bloch_coefficients;
use qtele_core::reversal::{
    averaged_fmax, fidelity_branches, fmax_correlated_closed, fmax_uncorrelated_closed, fmax_werner_closed,
    teleported_entanglement, werner_negativity_inside, werner_negativity_outside, ChannelModel, PauliPair,
};
use qtele_core::states::{bell_diagonal, input_state, negativity, Correlation, ResourceSpec, WernerParam};
use qtele_core::teleport::{
    extract_kraus, extract_term_kraus, probability_closed_form, simulate_double, simulate_single,
};
use qtele_core::{MeasurementOutcome, Result};

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self { pass, summary: summary.into(), notes: Vec::new() }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn werner(phi: f64) -> ResourceSpec {
    ResourceSpec::werner(Correlation::Uncorrelated, WernerParam::new(phi).unwrap())
}

fn phi_grid() -> Vec<f64> {
    (0..=10).map(|n| n as f64 / 10.0).collect()
}

fn uncorrelated_probabilities() -> Result<Outcome> {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let spec = ResourceSpec::new(Correlation::Uncorrelated, random_spectrum(&mut r))?;
        let theta = rand::Rng::gen_range(&mut r, 0.0..FRAC_PI_4 * 2.0);
        for rec in simulate_double(&input_state(theta), &spec)? {
            worst = worst.max((rec.probability - 1.0 / 16.0).abs());
        }
    }
    Ok(Outcome::new(worst < 1e-12, format!("20 random (q, theta), max |p - 1/16| = {worst:.3e}")))
}

fn uncorrelated_channel_identity() -> Result<Outcome> {
    let mut r = rng(2);
    let o11 = MeasurementOutcome::new(1, 1)?;
    let (mut choi_worst, mut closure_worst) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let q = random_spectrum(&mut r);
        let spec = ResourceSpec::new(Correlation::Uncorrelated, q)?;
        choi_worst = choi_worst.max(choi_distance(&extract_kraus(&spec, o11)?, &uncorrelated_channel(&q, o11)?));
        let input = random_density(&mut r, vec![2, 2]);
        for rec in simulate_double(&input, &spec)? {
            let (via_kraus, _) = rec.extracted_channel.apply(&input)?;
            closure_worst = closure_worst.max(via_kraus.distance(rec.conditional_state.as_ref().expect("p = 1/16")));
        }
    }
    Ok(Outcome::new(
        choi_worst < 1e-10 && closure_worst < 1e-10,
        format!("outcome (1,1) Choi distance {choi_worst:.3e}, 16-outcome closure {closure_worst:.3e}"),
    ))
}

fn werner_fidelity_grid() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for phi in phi_grid() {
        for theta in theta_grid(4, 16.0) {
            let report = averaged_fmax(&werner(phi), theta)?;
            worst = worst.max((report.averaged_fmax - fmax_werner_closed(WernerParam::new(phi)?, theta)).abs());
        }
    }
    Ok(Outcome::new(worst < 1e-9, format!("66-point (phi, theta) grid, max |F_num - F_closed| = {worst:.3e}")))
}

fn six_branch_audit() -> Result<Outcome> {
    let noiseless = ResourceSpec::new(Correlation::Uncorrelated, [1.0, 0.0, 0.0, 0.0])?;
    let mut out_numeric = 0.0f64;
    let mut out_literal = 0.0f64;
    let mut notes = Vec::new();
    for theta in theta_grid(4, 16.0) {
        let report = averaged_fmax(&noiseless, theta)?;
        let literal = fmax_uncorrelated_closed(&[1.0, 0.0, 0.0, 0.0], theta);
        let expected_literal = 1.0 + (2.0 * theta).sin().powi(2);
        out_numeric = out_numeric.max((report.averaged_fmax - 1.0).abs());
        out_literal = out_literal.max((literal - expected_literal).abs());
        notes.push(format!(
            "q=(1,0,0,0) theta={theta:.6}: numeric {:.12}, literal max {literal:.12}, discrepancy {:.3e}",
            report.averaged_fmax, report.discrepancy
        ));
    }
    let mut branch_worst = 0.0f64;
    let mut literal_worst = 0.0f64;
    for phi in phi_grid() {
        for theta in theta_grid(4, 16.0) {
            let spec = werner(phi);
            let numeric = averaged_fmax(&spec, theta)?.averaged_fmax;
            branch_worst = branch_worst.max((numeric - fidelity_branches(&spec.q(), theta)[3]).abs());
            literal_worst = literal_worst.max((numeric - fmax_uncorrelated_closed(&spec.q(), theta)).abs());
        }
    }
    let pass = out_numeric < 1e-10 && out_literal < 1e-12 && branch_worst < 1e-9;
    let mut o = Outcome::new(
        pass,
        format!(
            "noiseless |F-1| = {out_numeric:.3e}; literal = 1 + sin^2 2theta to {out_literal:.3e}; Werner vs fourth branch {branch_worst:.3e}"
        ),
    );
    o.notes = notes;
    Ok(o.note(format!("Werner grid, numeric vs literal six-branch max: max |diff| = {literal_worst:.6}")))
}

fn correlated_channel_and_probabilities() -> Result<Outcome> {
    let mut r = rng(5);
    let o11 = MeasurementOutcome::new(1, 1)?;
    let (mut choi_worst, mut term_worst, mut prob_worst, mut sum_worst) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let q = random_spectrum(&mut r);
        let spec = ResourceSpec::new(Correlation::Correlated, q)?;
        let literal = correlated_channel(&q, o11)?;
        choi_worst = choi_worst.max(choi_distance_normalized(&extract_kraus(&spec, o11)?, &literal));
        term_worst = term_worst.max(choi_distance_normalized(&extract_term_kraus(&spec, o11)?, &literal));
        for theta in theta_grid(4, 16.0) {
            let input = input_state(theta);
            let bloch = bloch_coefficients(&input)?;
            let records = simulate_double(&input, &spec)?;
            let total: f64 = records.iter().map(|x| x.probability).sum();
            sum_worst = sum_worst.max((total - 1.0).abs());
            for rec in &records {
                prob_worst =
                    prob_worst.max((rec.probability - probability_closed_form(&spec, rec.outcome, &bloch)).abs());
            }
        }
    }
    let pass = choi_worst < 1e-10 && prob_worst < 1e-10 && sum_worst < 1e-10;
    Ok(Outcome::new(
        pass,
        format!("(1,1) normalized Choi distance {choi_worst:.3e}; |p - pi/16| {prob_worst:.3e}; |sum p - 1| {sum_worst:.3e}"),
    )
    .note(format!("term-by-term Kraus expansion vs {{sqrt(q_k) s_k (x) s_k}}: {term_worst:.3e}")))
}

fn correlated_fidelity_grid() -> Result<Outcome> {
    let mut r = rng(6);
    let (mut worst, mut split_worst) = (0.0f64, 0.0f64);
    let mut example = String::new();
    for _ in 0..11 {
        let q = random_spectrum(&mut r);
        let spec = ResourceSpec::new(Correlation::Correlated, q)?;
        for theta in theta_grid(4, 16.0) {
            let report = averaged_fmax(&spec, theta)?;
            let closed = fmax_correlated_closed(&q, theta);
            let dev = (report.averaged_fmax - closed).abs();
            split_worst = split_worst.max((report.term_split_fmax.expect("correlated") - closed).abs());
            if dev > worst {
                worst = dev;
                example = format!(
                    "worst point q={q:.4?} theta={theta:.6}: numeric {:.10}, closed {closed:.10}",
                    report.averaged_fmax
                );
            }
        }
    }
    Ok(Outcome::new(worst < 1e-9, format!("11 random q x 5 theta, max |F_num - F_closed| = {worst:.3e}"))
        .note(example)
        .note(format!("term-by-term Kraus expansion vs closed form: {split_worst:.3e}")))
}

fn correlated_entanglement() -> Result<Outcome> {
    let mut r = rng(7);
    let (mut worst, mut split_worst) = (0.0f64, 0.0f64);
    let mut example = String::new();
    for n in 0..10 {
        let q = random_spectrum(&mut r);
        let spec = ResourceSpec::new(Correlation::Correlated, q)?;
        for theta in theta_grid(8, 32.0) {
            let target = (2.0 * theta).sin();
            let exact = teleported_entanglement(&spec, theta, ChannelModel::Exact)?;
            let split = teleported_entanglement(&spec, theta, ChannelModel::TermSplit)?;
            let dev = max_of(exact.per_outcome.iter().map(|o| (o.negativity - target).abs()));
            worst = worst.max(dev);
            split_worst = split_worst.max(max_of(split.per_outcome.iter().map(|o| (o.negativity - target).abs())));
            if n == 0 && theta == 0.0 {
                example = format!(
                    "q={q:.4?} theta=0: outcome (1,1) negativity {:.10}, target 0",
                    exact.per_outcome[0].negativity
                );
            }
        }
    }
    Ok(Outcome::new(worst < 1e-10, format!("10 random q x 9 theta, all outcomes, max |N - sin 2theta| = {worst:.3e}"))
        .note(example)
        .note(format!("term-by-term Kraus expansion: max |N - sin 2theta| = {split_worst:.3e}")))
}

fn bracket_adjudication() -> Result<Outcome> {
    let fixtures = [(0.3, 0.0), (0.6, 23.0 / 75.0), (0.9, 121.0 / 150.0)];
    let mut pass = true;
    let mut notes = Vec::new();
    let (mut inside_worst, mut outside_worst) = (0.0f64, 0.0f64);
    for (phi, fixture) in fixtures {
        let w = WernerParam::new(phi)?;
        let report = teleported_entanglement(&werner(phi), FRAC_PI_4, ChannelModel::Exact)?;
        let spread = max_of(report.per_outcome.iter().map(|o| (o.negativity - report.average).abs()));
        let inside = werner_negativity_inside(w, FRAC_PI_4);
        let outside = werner_negativity_outside(w, FRAC_PI_4);
        inside_worst = inside_worst.max((report.average - inside).abs());
        outside_worst = outside_worst.max((report.average - outside).abs());
        pass &= (report.average - fixture).abs() < 1e-9 && spread < 1e-9;
        notes.push(format!(
            "phi={phi}: numeric {:.12} (outcome spread {spread:.1e}), inside {inside:.12}, outside {outside:.12}",
            report.average
        ));
    }
    let reading = if inside_worst < outside_worst { "inside" } else { "outside" };
    pass &= reading == "inside";
    let mut o = Outcome::new(
        pass,
        format!("matching reading: {reading}-bracket (|inside| {inside_worst:.3e}, |outside| {outside_worst:.3e})"),
    );
    o.notes = notes;
    Ok(o)
}

fn property_suites() -> Result<Outcome> {
    let mut r = rng(9);
    let mut cptp = 0.0f64;
    for _ in 0..10 {
        let q = random_spectrum(&mut r);
        cptp = cptp.max(pauli_channel(&q)?.completeness_defect());
        for outcome in MeasurementOutcome::all() {
            cptp = cptp.max(uncorrelated_channel(&q, outcome)?.completeness_defect());
            cptp = cptp.max(correlated_channel(&q, outcome)?.completeness_defect());
        }
    }
    for pair in PauliPair::all() {
        cptp = cptp.max(pair.channel().completeness_defect());
    }

    let mut lu = 0.0f64;
    for _ in 0..100 {
        let rho = random_density(&mut r, vec![2, 2]);
        let u = random_qubit_unitary(&mut r).kron(&random_qubit_unitary(&mut r));
        let before = negativity(&rho, 1)?;
        let after = negativity(&rho.conjugated_by(&u)?, 1)?;
        lu = lu.max((before - after).abs());
    }

    let input = max_of((0..50).map(|n| {
        let theta = n as f64 * FRAC_PI_4 * 2.0 / 49.0;
        (negativity(&input_state(theta), 1).unwrap() - (2.0 * theta).sin().abs()).abs()
    }));

    let mut single = 0.0f64;
    for _ in 0..10 {
        let q = random_spectrum(&mut r);
        let rho = random_density(&mut r, vec![2]);
        let records = simulate_single(&rho, &bell_diagonal(&q)?)?;
        let (target, _) = pauli_channel(&q)?.apply(&rho)?;
        single = single.max(records[0].conditional_state.as_ref().expect("p = 1/4").distance(&target));
    }

    let pass = cptp < 1e-10 && lu < 1e-10 && input < 1e-10 && single < 1e-10;
    Ok(Outcome::new(
        pass,
        format!("CPTP {cptp:.3e}; local-unitary negativity {lu:.3e}; input negativity {input:.3e}; single-pair depolarizing {single:.3e}"),
    ))
}

fn performance(suite_start: Instant) -> Result<Outcome> {
    let input = input_state(0.3);
    let mut slowest = Duration::ZERO;
    for kind in [Correlation::Uncorrelated, Correlation::Correlated] {
        let spec = ResourceSpec::new(kind, [0.4, 0.2, 0.3, 0.1])?;
        for _ in 0..3 {
            let t = Instant::now();
            let records = simulate_double(&input, &spec)?;
            slowest = slowest.max(t.elapsed());
            assert_eq!(records.len(), 16);
        }
    }
    let total = suite_start.elapsed();
    Ok(Outcome::new(
        slowest < Duration::from_secs(1) && total < Duration::from_secs(300),
        format!(
            "simulate_double {:.3} s (slowest of 6, both resources); suite so far {:.1} s",
            slowest.as_secs_f64(),
            total.as_secs_f64()
        ),
    ))
}

fn main() -> ExitCode {
    let suite_start = Instant::now();
    type Check = Box<dyn Fn() -> Result<Outcome>>;
    let checks: Vec<(&str, Option<Duration>, Check)> = vec![
        ("uncorrelated outcome probabilities", Some(Duration::from_secs(5)), Box::new(uncorrelated_probabilities)),
        ("uncorrelated channel identity and closure", None, Box::new(uncorrelated_channel_identity)),
        ("Werner averaged maximum fidelity", Some(Duration::from_secs(60)), Box::new(werner_fidelity_grid)),
        ("six-branch fidelity audit", None, Box::new(six_branch_audit)),
        ("correlated channel and probabilities", None, Box::new(correlated_channel_and_probabilities)),
        ("correlated averaged maximum fidelity", None, Box::new(correlated_fidelity_grid)),
        ("correlated teleported entanglement", None, Box::new(correlated_entanglement)),
        ("Werner entanglement bracket reading", None, Box::new(bracket_adjudication)),
        ("property suites", None, Box::new(property_suites)),
        ("performance floor", None, Box::new(move || performance(suite_start))),
    ];

    let mut failures = 0;
    for (n, (name, budget, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, summary, notes) = match result {
            Ok(o) => {
                let within = budget.is_none_or(|b| elapsed < b);
                let summary = if within { o.summary } else { format!("{} (over time budget)", o.summary) };
                (o.pass && within, summary, o.notes)
            }
            Err(e) => (false, format!("error: {e}"), Vec::new()),
        };
        failures += usize::from(!pass);
        println!(
            "[{}] criterion {:>2}: {name}: {summary} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            n + 1,
            elapsed.as_secs_f64()
        );
        for line in notes {
            println!("         {line}");
        }
    }
    println!("{} of {} criteria passed", checks.len() - failures, checks.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
