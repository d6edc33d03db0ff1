//! Run manifests: what was run, how long it took, and digests of the files
//! it wrote.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use frobdist::ExperimentConfig;
use serde::{Deserialize, Serialize};

/// Settings of a covering-radius experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverConfig {
    pub count: u64,
    pub seed: u64,
    pub tol: f64,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ManifestConfig {
    Sweep(ExperimentConfig),
    Cover(CoverConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: ManifestConfig,
    pub wall_time_secs: f64,
    pub redraws: u64,
    /// Output file name → SHA-256 hex digest.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(config: ManifestConfig) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            wall_time_secs: 0.0,
            redraws: 0,
            outputs: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// `<output>.manifest.json`
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// The sweep configuration recorded next to a sample file, if any.
pub fn sweep_config_for(output: &Path) -> Option<ExperimentConfig> {
    let text = std::fs::read_to_string(manifest_path(output)).ok()?;
    match RunManifest::from_json(&text).ok()?.config {
        ManifestConfig::Sweep(c) => Some(c),
        ManifestConfig::Cover(_) => None,
    }
}
