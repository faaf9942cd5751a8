use std::io::Read;
use std::path::{Path, PathBuf};

use qtele_core::states::{validate_spectrum, Correlation};
use serde::Deserialize;

use crate::error::CliError;
use crate::experiments::Experiment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Uncorrelated,
    Correlated,
}

impl From<Kind> for Correlation {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Uncorrelated => Correlation::Uncorrelated,
            Kind::Correlated => Correlation::Correlated,
        }
    }
}

/// A scalar, an explicit list, or `steps` equal intervals from `start` to
/// `stop` inclusive (`steps + 1` points).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Value(f64),
    Values(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let pts = match self {
            Grid::Value(v) => vec![*v],
            Grid::Values(v) if v.is_empty() => return Err(CliError::Config("empty value list".into())),
            Grid::Values(v) => v.clone(),
            Grid::Range { steps: 0, .. } => return Err(CliError::Config("grid steps must be >= 1".into())),
            Grid::Range { start, stop, steps } => {
                (0..=*steps).map(|n| start + (stop - start) * n as f64 / *steps as f64).collect()
            }
        };
        if pts.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config("grid values must be finite".into()));
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceConfig {
    pub kind: Option<Kind>,
    pub q: Option<[f64; 4]>,
    pub phi: Option<Grid>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    #[serde(default)]
    pub resource: ResourceConfig,
    pub theta: Option<Grid>,
    #[serde(default)]
    pub output: OutputConfig,
    pub seed: Option<u64>,
    /// Number of random spectra or input states drawn from `seed`.
    pub samples: Option<usize>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    /// Reads from `path`, or standard input when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Config(format!("reading stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?
        };
        Self::parse(&text)
    }
}

/// Fully validated parameters for one run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub experiment: &'static Experiment,
    pub kind: Correlation,
    pub q: Option<[f64; 4]>,
    pub phi: Option<Vec<f64>>,
    pub theta: Vec<f64>,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Resolved {
    pub fn new(config: &ExperimentConfig, experiment: &'static Experiment) -> Result<Self, CliError> {
        let defaults = (experiment.defaults)();
        let r = &config.resource;
        if r.q.is_some() && r.phi.is_some() {
            return Err(CliError::Config("resource.q and resource.phi are mutually exclusive".into()));
        }
        let kind = match (r.kind, experiment.kind) {
            (Some(k), Some(fixed)) if Correlation::from(k) != fixed => {
                return Err(CliError::Config(format!("experiment {} requires kind {}", experiment.name, fixed.name())))
            }
            (Some(k), _) => k.into(),
            (None, Some(fixed)) => fixed,
            (None, None) => Correlation::Uncorrelated,
        };
        if let Some(q) = &r.q {
            validate_spectrum(q).map_err(|e| CliError::Config(e.to_string()))?;
        }
        let phi = match &r.phi {
            Some(g) => Some(g.points()?),
            None if r.q.is_none() => defaults.phi.clone(),
            None => None,
        };
        if let Some(p) = &phi {
            if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(CliError::Config("phi values must lie in [0, 1]".into()));
            }
        }
        let theta = match &config.theta {
            Some(g) => g.points()?,
            None => defaults.theta.clone(),
        };
        let samples = config.samples.unwrap_or(defaults.samples);
        if samples == 0 {
            return Err(CliError::Config("samples must be >= 1".into()));
        }
        Ok(Self {
            experiment,
            kind,
            q: r.q.or(if phi.is_none() { defaults.q } else { None }),
            phi,
            theta,
            seed: config.seed.unwrap_or(0),
            samples,
            format: config.output.format.unwrap_or(Format::Csv),
            out: config.output.path.clone(),
        })
    }
}
