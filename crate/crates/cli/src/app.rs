//! Argument parsing and dispatch shared by the `hgda` binary and tests.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{self, Outcome};
use crate::config::parse_formats;
use crate::{CliError, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(name = "hgda", version, about = "Stability experiments for gradient dynamics on bilinear games")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment description (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory, overrides [output] dir
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// csv or csv+svg
    #[arg(long, global = true)]
    format: Option<String>,

    /// Worker threads for sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Master seed, overrides the top-level `seed`
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Stability verdict, spectral radius and roots at one learning rate
    Analyze,
    /// Verdict and radius over a range of learning rates
    Sweep,
    /// Iterate the dynamics and record the trajectory
    Simulate,
    /// Learning rate where the dynamics stop converging
    Boundary,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    let formats = cli.format.as_deref().map(parse_formats).transpose()?;
    Overrides { out: cli.out.clone(), formats, seed: cli.seed }.apply(&mut cfg);
    if cli.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    match cli.command {
        Command::Analyze => commands::cmd_analyze(&cfg),
        Command::Sweep => commands::cmd_sweep(&cfg, cli.threads),
        Command::Simulate => commands::cmd_simulate(&cfg),
        Command::Boundary => commands::cmd_boundary(&cfg),
    }
}

/// Parses `args` (program name first), runs the command, prints its report
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
