//! Experiment runner for `hgda-core`: reads a TOML experiment description,
//! runs analyses, sweeps, simulations and boundary searches, and writes CSV
//! (plus optional SVG) results.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

pub use config::ExperimentConfig;
pub use error::CliError;

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<config::Format>>,
    pub seed: Option<u64>,
}

impl Overrides {
    /// `--seed` replaces the master seed; per-section seeds in the file
    /// still take precedence for their own draws.
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(dir) = &self.out {
            cfg.output.dir = dir.clone();
        }
        if let Some(f) = &self.formats {
            cfg.output.formats = f.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = Some(s);
        }
    }
}
