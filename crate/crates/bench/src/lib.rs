//! Scenario runner for the `slidedup` filters: sweeps parameters, measures
//! error rates against exact ground truth and writes plot-ready `.dat`
//! files with a JSON manifest that reproduces the run.

pub mod cli;
pub mod datafile;
pub mod error;
pub mod grid;
pub mod manifest;
pub mod run;
pub mod scenario;

pub use error::{BenchError, Result};
pub use run::{run, Outcome};
pub use scenario::{Scenario, ScenarioKind};
