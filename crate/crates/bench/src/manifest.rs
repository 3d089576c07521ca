//! Run manifests: the resolved scenario plus what the run produced.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::run::{Outcome, Skipped};
use crate::scenario::Scenario;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub scenario: Scenario,
    /// Stabilization count of stable Bloom filters in this run.
    pub sbf_decrements: u32,
    pub files: Vec<String>,
    pub skipped: Vec<Skipped>,
}

impl Manifest {
    pub fn new(scenario: &Scenario, outcome: &Outcome) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.clone(),
            sbf_decrements: scenario.params.sbf.decrements,
            files: outcome.files.iter().map(|f| f.name.clone()).collect(),
            skipped: outcome.skipped.clone(),
        }
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }

    pub fn load(path: &Path) -> Result<Self> {
        // An unreadable manifest is a bad argument, not a failed run.
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Args(format!("cannot read manifest {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|source| BenchError::Manifest {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Writes the data files and the manifest into `dir`, creating it.
pub fn write_outputs(dir: &Path, scenario: &Scenario, outcome: &Outcome) -> Result<Manifest> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    for file in &outcome.files {
        file.write_to(dir)?;
    }
    let manifest = Manifest::new(scenario, outcome);
    let path = dir.join(MANIFEST_FILE);
    std::fs::write(&path, manifest.render()).map_err(|e| BenchError::io(path, e))?;
    Ok(manifest)
}
