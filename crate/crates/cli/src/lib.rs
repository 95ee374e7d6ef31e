//! Command-line front end for `lfmaxwell`: scenario files, frequency sweeps,
//! convergence studies, single solves with VTK output and invariant checks.

pub mod check;
pub mod config;
pub mod converge;
pub mod error;
pub mod freqs;
pub mod sweep;
pub mod vtk;

use std::path::Path;

use lfmaxwell::physics::{Problem, Scenario};

pub use config::{parse_scenario, ScenarioConfig};
pub use error::CliError;

/// Version tag written into every CSV header.
pub const CSV_VERSION: &str = concat!("lfmaxwell ", env!("CARGO_PKG_VERSION"));

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Discretizes a scenario; failures here are problems with the scenario.
pub fn build_problem(scenario: &Scenario) -> Result<Problem, CliError> {
    Problem::build(scenario).map_err(|e| CliError::Config(e.to_string()))
}
