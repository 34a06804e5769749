use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::settings::Settings;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> anyhow::Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(FileDigest {
            path: path.to_path_buf(),
            sha256: Sha256::digest(&bytes)
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect(),
        })
    }
}

/// Everything needed to re-run the command that produced `outputs`.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    /// Flags after merging the config file.
    pub settings: Settings,
    pub config_digest: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub host: String,
    /// Command-specific facts such as accuracies or resolved defaults.
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn write(
        command: &str,
        settings: &Settings,
        inputs: &[&Path],
        outputs: &[PathBuf],
        summary: serde_json::Value,
    ) -> anyhow::Result<PathBuf> {
        let m = Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            settings: settings.clone(),
            config_digest: vmgbs::pipeline::config_digest(settings)?,
            inputs: inputs
                .iter()
                .map(|p| FileDigest::of(p))
                .collect::<anyhow::Result<_>>()?,
            outputs: outputs
                .iter()
                .map(|p| FileDigest::of(p))
                .collect::<anyhow::Result<_>>()?,
            host: vmgbs::experiment::host_label(),
            summary,
        };
        let dir = outputs
            .first()
            .and_then(|p| p.parent())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| settings.out_dir());
        let path = dir.join(format!("{command}.manifest.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&m)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
