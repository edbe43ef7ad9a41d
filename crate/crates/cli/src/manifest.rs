use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use airmag_core::ingest::BuildConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl InputFile {
    pub fn new(path: &Path, content: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            sha256: hex(&Sha256::digest(content)),
            bytes: content.len() as u64,
        }
    }
}

/// What produced an artifact. Written beside every output file as
/// `<file>.manifest.json` and embedded in bundles.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Vec<InputFile>,
    pub config: BuildConfig,
    pub parameters: BTreeMap<String, String>,
    /// `SOURCE_DATE_EPOCH` when set, else the current time.
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, config: BuildConfig) -> Self {
        Self {
            tool: "airmag",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs: Vec::new(),
            config,
            parameters: BTreeMap::new(),
            created_unix: created_unix(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("manifest always serializes")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest always serializes");
        s.push('\n');
        s
    }
}

fn created_unix() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sidecar_path(artifact: &Path) -> std::path::PathBuf {
    let mut name = artifact.as_os_str().to_owned();
    name.push(".manifest.json");
    name.into()
}
