//! Experiment runner for the `pathcons` finite-volume laboratory: declarative
//! JSON configs, parallel runs and sweeps, CSV profiles and curves, JSON
//! diagnostics and reproducible manifests.

pub mod builtin;
pub mod config;
pub mod error;
pub mod model;
pub mod output;
pub mod runner;
pub mod sweep;

pub use config::ExperimentConfig;
pub use error::LabError;
pub use runner::{run_experiment, RunOutcome, RunReport};
pub use sweep::{run_sweep, SweepOutcome, SweepReport};

use std::path::Path;

use output::{Manifest, Verb};

/// A config given on the command line: a file (bare config or manifest) or
/// the name of a built-in experiment.
pub fn resolve(arg: &str) -> Result<(ExperimentConfig, Option<Verb>), LabError> {
    let path = Path::new(arg);
    if !path.exists() {
        return Ok((builtin::load(arg)?, None));
    }
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    match Manifest::detect(&text) {
        Some(m) => {
            let m = m?;
            Ok((m.config, Some(m.verb)))
        }
        None => Ok((ExperimentConfig::from_json(&text)?, None)),
    }
}
