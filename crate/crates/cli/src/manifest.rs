use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::output::Format;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one invocation. Re-running `argv` reproduces every output file except
/// the timing fields.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub manifest_version: u32,
    pub tool: &'static str,
    pub cli_version: &'static str,
    pub core_version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub config_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Format,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
    pub outputs: Vec<PathBuf>,
    pub exit_code: i32,
    pub error: Option<String>,
    /// Command-specific summary of the results.
    pub summary: serde_json::Value,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}
