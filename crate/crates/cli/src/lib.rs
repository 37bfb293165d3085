//! Command-line experiment runner for `cbsars`.

pub mod config;
pub mod run;

pub use config::{parse_config, ConfigBuilder, ConfigError, Mode, RunConfig};
pub use run::{run_experiment, ExitStatus, ExperimentOutcome, RunError};
