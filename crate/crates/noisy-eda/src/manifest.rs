//! The run manifest: a JSON record of what was run and what was written.
//!
//! The manifest is written after every other output file, so its presence
//! marks a run that completed; a directory with CSVs but no manifest was
//! interrupted.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::config::RawExperiment;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Version of the tool that produced the outputs.
    pub version: String,
    /// The subcommand that ran, e.g. "run" or "reproduce onemax".
    pub command: String,
    pub out_dir: String,
    pub duration_secs: f64,
    /// Fully resolved settings of every experiment, in run order.
    pub experiments: Vec<RawExperiment>,
    /// Files written, relative to `out_dir`, sorted.
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: impl Into<String>,
        out_dir: &Path,
        duration: Duration,
        experiments: Vec<RawExperiment>,
        mut files: Vec<String>,
    ) -> Self {
        files.sort();
        Self {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.into(),
            out_dir: out_dir.display().to_string(),
            duration_secs: duration.as_secs_f64(),
            experiments,
            files,
        }
    }

    /// Serialises into `out_dir/manifest.json` and returns the path.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(self).expect("manifest serialisation cannot fail");
        std::fs::write(&path, json + "\n").map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}
