//! Run manifests: every command writes one next to its primary output, so
//! a run can be audited and replayed. Outputs are bit-reproducible for a
//! fixed seed; only the timestamp differs between replays.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use pulsesynth::io::write_text_atomic;
use pulsesynth::Result;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn param_opt(self, key: &str, value: Option<impl ToString>) -> Self {
        match value {
            Some(v) => self.param(key, v),
            None => self,
        }
    }

    /// `<stem>.manifest.json` next to the primary output.
    pub fn path_for(out: &Path) -> PathBuf {
        out.with_extension("manifest.json")
    }

    pub fn write_next_to(&self, out: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).map_err(pulsesynth::Error::from)?;
        write_text_atomic(&Self::path_for(out), &format!("{json}\n"))
    }
}
