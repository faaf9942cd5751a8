mod config;
mod error;
mod experiments;
mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Format, Resolved};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "qtele",
    version,
    about = "Two-pair entanglement teleportation experiments",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report.
    Run {
        /// JSON config file, or `-` for standard input.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Experiment name; overrides the config.
        #[arg(long)]
        experiment: Option<String>,
        /// Report path; overrides the config. Standard output if unset.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the registered experiments.
    List,
}

fn run(
    config: Option<PathBuf>,
    experiment: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let mut cfg = match &config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if experiment.is_some() {
        cfg.experiment = experiment;
    }
    if out.is_some() {
        cfg.output.path = out;
    }
    if format.is_some() {
        cfg.output.format = format;
    }
    if seed.is_some() {
        cfg.seed = seed;
    }
    let name = cfg
        .experiment
        .as_deref()
        .ok_or_else(|| CliError::Config("no experiment given (use --experiment or the config)".into()))?;
    let exp = experiments::find(name)
        .ok_or_else(|| CliError::Config(format!("unknown experiment {name:?}; see `qtele list`")))?;
    let resolved = Resolved::new(&cfg, exp)?;
    let rows = exp.run(&resolved)?;

    match &resolved.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            report::write(&rows, resolved.format, &mut w)?;
            w.flush().map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        }
        None => report::write(&rows, resolved.format, std::io::stdout().lock())?,
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    eprintln!("{}: {} rows, {} failed", exp.name, rows.len(), failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            for e in &experiments::EXPERIMENTS {
                println!("{:<28} {}", e.name, e.description);
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, experiment, out, format, seed } => match run(config, experiment, out, format, seed) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
