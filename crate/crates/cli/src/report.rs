//! Structured run reports printed to stdout.
//!
//! A report captures everything needed to reproduce a run: the command, the
//! input and output files with content hashes, the tolerances, the RNG seed
//! when one was used, and the computed verdicts and residuals. Maps are
//! ordered, so two runs with the same inputs, seed and tolerances render
//! identically except for the wall time.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Version tag of the report layout.
pub const REPORT_SCHEMA: &str = "kframe-report/1";

/// A file the command read or wrote, with the hash of its exact bytes.
#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

/// Tolerances a run was executed with.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Relative rank and definiteness threshold.
    pub rtol: f64,
    /// Tolerance for residual-based verdicts.
    pub residual_tol: f64,
}

/// The full result of one command invocation.
#[derive(Debug, Serialize)]
pub struct ReportDocument {
    schema_version: &'static str,
    command: String,
    inputs: Vec<FileRecord>,
    outputs: Vec<FileRecord>,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    verdicts: BTreeMap<String, Value>,
    residuals: BTreeMap<String, f64>,
    wall_time_ms: f64,
}

impl ReportDocument {
    pub fn new(command: &str, tolerances: Tolerances) -> Self {
        ReportDocument {
            schema_version: REPORT_SCHEMA,
            command: command.to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            tolerances,
            seed: None,
            verdicts: BTreeMap::new(),
            residuals: BTreeMap::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn record_input(&mut self, path: &std::path::Path, bytes: &[u8]) {
        self.inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn record_output(&mut self, path: &std::path::Path, bytes: &[u8]) {
        self.outputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    /// Records a named verdict; values are booleans, counts, strings or
    /// arrays of those. Dotted keys group related verdicts.
    pub fn verdict(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    /// Records a named residual magnitude.
    pub fn residual(&mut self, key: &str, value: f64) {
        self.residuals.insert(key.to_string(), value);
    }

    pub fn set_wall_time(&mut self, elapsed: Duration) {
        self.wall_time_ms = elapsed.as_secs_f64() * 1e3;
    }

    /// Pretty-printed JSON for stdout.
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report data always serializes")
    }

    #[cfg(test)]
    fn verdicts(&self) -> &BTreeMap<String, Value> {
        &self.verdicts
    }
}

/// Lowercase hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        use std::fmt::Write;
        let _ = write!(s, "{b:02x}");
        s
    })
}
