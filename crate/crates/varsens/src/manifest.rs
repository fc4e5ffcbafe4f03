//! Run manifests: what was run, with which settings, and digests of the
//! files it wrote.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    /// Path relative to the output directory.
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command-line arguments after the program name.
    pub args: Vec<String>,
    /// Working directory that relative paths in `args` refer to.
    pub cwd: PathBuf,
    pub input_spec_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub r_bootstrap: Option<usize>,
    /// Seconds since the Unix epoch.
    pub started_at: u64,
    pub finished_at: u64,
    pub tool_version: String,
    pub outputs: Vec<OutputDigest>,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn digest_outputs(dir: &Path, files: &[String]) -> Result<Vec<OutputDigest>> {
    files.iter().map(|f| Ok(OutputDigest { file: f.clone(), sha256: sha256_file(&dir.join(f))? })).collect()
}
