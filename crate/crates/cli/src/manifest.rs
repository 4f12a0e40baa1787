use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

/// Record of one CLI run, written after every output file exists.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
}

pub struct Run {
    command: String,
    config: serde_json::Value,
    started: Instant,
    outputs: Vec<PathBuf>,
}

impl Run {
    pub fn start(command: &str, config: impl Serialize) -> Result<Self> {
        Ok(Run {
            command: command.to_owned(),
            config: serde_json::to_value(config)?,
            started: Instant::now(),
            outputs: Vec::new(),
        })
    }

    /// Writes `contents` to `path` and records it as an output.
    pub fn write(&mut self, path: &Path, contents: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(path.to_owned());
        Ok(())
    }

    /// Writes `<anchor stem>.manifest.json` next to `anchor` and returns its path.
    pub fn finish(self, anchor: &Path) -> Result<PathBuf> {
        let path = sibling(anchor, "manifest.json");
        let manifest = RunManifest {
            command: self.command,
            config: self.config,
            version: endpoint_core::VERSION.to_owned(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        for out in &manifest.outputs {
            anyhow::ensure!(out.exists(), "output {} vanished before manifest", out.display());
        }
        let json = serde_json::to_string_pretty(&manifest)?;
        fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// `dir/stem.csv` -> `dir/stem.<suffix>`
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}
