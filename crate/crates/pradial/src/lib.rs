//! Experiment harness for `pradial-core`: configuration, CSV/JSON output,
//! manifests and the `pradial` command-line tool.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;
pub mod run;

pub use config::{CommandSpec, Thresholds};
pub use error::{CliError, CliResult};
pub use run::{run_into, Manifest, RunSummary};
