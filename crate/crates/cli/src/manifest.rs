use std::path::Path;

use hypershape::sim::RNG_ALGORITHM;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// How points are assigned to bins; recorded in every manifest.
pub const BIN_CONVENTION: &str = "equal-width bins per axis; edges j*step+lo with the last edge pinned to hi; \
     bins half-open [e_j, e_j+1) except the last, which is closed; points outside [lo, hi] dropped; \
     default range is the per-axis data min/max; center of mass rounded half away from zero";

/// Everything needed to regenerate the outputs of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub command_line: Vec<String>,
    pub software_version: String,
    pub timestamp: String,
    pub rng_algorithm: String,
    pub bin_convention: String,
    pub sp_variant: String,
    pub seed: Option<u64>,
    pub cell_budget: u64,
    pub parameters: Value,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, parameters: Value) -> Self {
        Manifest {
            command: command.to_string(),
            command_line: std::env::args().collect(),
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            rng_algorithm: RNG_ALGORITHM.to_string(),
            bin_convention: BIN_CONVENTION.to_string(),
            sp_variant: "paper".to_string(),
            seed: None,
            cell_budget: hypershape::binning::DEFAULT_CELL_BUDGET,
            parameters,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
    }
}
