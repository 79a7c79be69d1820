//! Output plumbing: atomic file writes, digests, and the run manifest.
//!
//! Every command ends by writing a `manifest.json` that lists each emitted
//! artifact with its SHA-256, the digests of any input files, and the fully
//! resolved parameters — enough to check byte-for-byte reproducibility with
//! nothing but the manifest of a second run.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{io_at, CliResult};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| io_at(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Where one input series came from: a user file (with digest) or the
/// built-in synthetic generator.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source")]
pub enum InputRecord {
    #[serde(rename = "file")]
    File { path: String, sha256: String },
    #[serde(rename = "synthetic")]
    Synthetic { description: String },
}

impl InputRecord {
    pub fn file(path: &Path) -> CliResult<Self> {
        Ok(InputRecord::File {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        })
    }

    pub fn synthetic(description: impl Into<String>) -> Self {
        InputRecord::Synthetic {
            description: description.into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Wall-clock stamp; the only field that differs between identical runs.
    pub created_utc: String,
    /// Fully resolved parameters after defaults and overrides.
    pub parameters: serde_json::Value,
    pub inputs: BTreeMap<String, InputRecord>,
    /// Every artifact this run wrote, `manifest.json` included.
    pub files: Vec<String>,
    /// SHA-256 of each data artifact (the manifest cannot contain its own).
    pub sha256: BTreeMap<String, String>,
}

/// An output directory that records a digest for everything written to it.
pub struct OutDir {
    dir: PathBuf,
    digests: BTreeMap<String, String>,
}

impl OutDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| io_at(dir, e))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            digests: BTreeMap::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Write atomically: a temporary file in the same directory, then a
    /// rename, so a crash can never leave a half-written artifact behind.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let final_path = self.dir.join(name);
        let tmp_path = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp_path, bytes).map_err(|e| io_at(&tmp_path, e))?;
        fs::rename(&tmp_path, &final_path).map_err(|e| io_at(&final_path, e))?;
        self.digests.insert(name.to_string(), sha256_hex(bytes));
        Ok(())
    }

    /// Close the run: write `manifest.json` listing everything emitted.
    pub fn finish(
        mut self,
        command: &str,
        parameters: serde_json::Value,
        inputs: BTreeMap<String, InputRecord>,
    ) -> CliResult<()> {
        let mut files: Vec<String> = self.digests.keys().cloned().collect();
        files.push("manifest.json".to_string());
        let manifest = Manifest {
            tool: "sunfleet",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            created_utc: chrono::Utc::now().to_rfc3339(),
            parameters,
            inputs,
            files,
            sha256: std::mem::take(&mut self.digests),
        };
        let mut body = serde_json::to_string_pretty(&manifest)
            .expect("manifest serialization cannot fail");
        body.push('\n');
        self.write("manifest.json", body.as_bytes())?;
        Ok(())
    }
}
