//! Run manifests: a serialized record of every parameter that determines
//! a run, embedded into each produced file and optionally written as a
//! standalone `manifest.json`. Re-running the same command line
//! reproduces outputs byte-for-byte (exact paths and fixed-precision
//! float paths alike).

use crate::errors::{io_ctx, CliResult};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunManifest {
    pub format_version: u32,
    pub library_version: String,
    /// Subcommand name.
    pub command: String,
    /// Every parameter of the run, in deterministic (sorted) order.
    pub parameters: BTreeMap<String, String>,
    /// Paths this run writes.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            format_version: FORMAT_VERSION,
            library_version: heiscf::VERSION.to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Single-line JSON form, used in CSV comment headers.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    /// Writes the standalone manifest file.
    pub fn write(&self, path: &Path) -> CliResult<()> {
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        io_ctx(std::fs::write(path, body + "\n"), path)
    }
}
