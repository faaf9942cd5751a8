use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    /// numerical and closed form must match within tolerance
    Agree,
    /// the closed form is known to be wrong here; the row passes when the
    /// mismatch is present
    Disagree,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub experiment: &'static str,
    pub kind: &'static str,
    pub q1: Option<f64>,
    pub q2: Option<f64>,
    pub q3: Option<f64>,
    pub q4: Option<f64>,
    pub phi: Option<f64>,
    pub theta: Option<f64>,
    pub outcome: Option<String>,
    pub quantity: &'static str,
    pub numerical: f64,
    pub closed_form: Option<f64>,
    pub discrepancy: Option<f64>,
    pub tolerance: f64,
    pub expect: Expect,
    pub pass: bool,
}

pub const HEADER: [&str; 16] = [
    "experiment",
    "kind",
    "q1",
    "q2",
    "q3",
    "q4",
    "phi",
    "theta",
    "outcome",
    "quantity",
    "numerical",
    "closed_form",
    "discrepancy",
    "tolerance",
    "expect",
    "pass",
];

/// Builder for the parameter columns shared by consecutive rows.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub kind: &'static str,
    pub q: Option<[f64; 4]>,
    pub phi: Option<f64>,
    pub theta: Option<f64>,
    pub outcome: Option<String>,
}

impl ReportRow {
    pub fn new(
        experiment: &'static str,
        params: &Params,
        quantity: &'static str,
        numerical: f64,
        closed_form: f64,
        tolerance: f64,
        expect: Expect,
    ) -> Self {
        let discrepancy = (numerical - closed_form).abs();
        let within = discrepancy <= tolerance;
        let pass = match expect {
            Expect::Agree => within,
            Expect::Disagree => !within && discrepancy.is_finite(),
        };
        let q = params.q.map(|q| q.map(Some)).unwrap_or([None; 4]);
        Self {
            experiment,
            kind: params.kind,
            q1: q[0],
            q2: q[1],
            q3: q[2],
            q4: q[3],
            phi: params.phi,
            theta: params.theta,
            outcome: params.outcome.clone(),
            quantity,
            numerical,
            closed_form: Some(closed_form),
            discrepancy: Some(discrepancy),
            tolerance,
            expect,
            pass,
        }
    }
}

/// 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn record(row: &ReportRow) -> [String; 16] {
    [
        row.experiment.to_string(),
        row.kind.to_string(),
        opt(row.q1),
        opt(row.q2),
        opt(row.q3),
        opt(row.q4),
        opt(row.phi),
        opt(row.theta),
        row.outcome.clone().unwrap_or_default(),
        row.quantity.to_string(),
        float(row.numerical),
        opt(row.closed_form),
        opt(row.discrepancy),
        float(row.tolerance),
        match row.expect {
            Expect::Agree => "agree".into(),
            Expect::Disagree => "disagree".into(),
        },
        row.pass.to_string(),
    ]
}

pub fn write(rows: &[ReportRow], format: Format, out: impl Write) -> Result<(), CliError> {
    let io = |e: &dyn std::fmt::Display| CliError::Io(format!("writing report: {e}"));
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::Never).from_writer(out);
            w.write_record(HEADER).map_err(|e| io(&e))?;
            for row in rows {
                w.write_record(record(row)).map_err(|e| io(&e))?;
            }
            w.flush().map_err(|e| io(&e))
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| io(&e))?;
            out.write_all(b"\n").map_err(|e| io(&e))
        }
    }
}
