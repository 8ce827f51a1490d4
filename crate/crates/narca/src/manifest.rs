//! Run manifest: configuration, seed, versions and a hash of every output.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::matrix_io::write_json;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub input: String,
    pub stopwords: Option<String>,
    pub min_freq: u32,
    pub min_docs: u32,
    pub alpha: f64,
    pub permutations: usize,
    pub seed: u64,
    pub dims: &'static str,
    pub campaign: Option<u32>,
    pub top_tweets: usize,
    pub top_terms: usize,
}

#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub files: Vec<FileEntry>,
}

pub fn hash_file(path: &Path) -> Result<(u64, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok((bytes.len() as u64, hex::encode(Sha256::digest(&bytes))))
}

/// Hashes `files` (paths inside `dir`) and writes `manifest.json`.
pub fn write_manifest(dir: &Path, command: &str, config: RunConfig, files: &[PathBuf]) -> Result<PathBuf, CliError> {
    let mut entries = Vec::with_capacity(files.len());
    for f in files {
        let (bytes, sha256) = hash_file(f)?;
        let rel = f.strip_prefix(dir).unwrap_or(f);
        entries.push(FileEntry {
            path: rel.display().to_string(),
            bytes,
            sha256,
        });
    }
    entries.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        core_version: narca_core::VERSION,
        command: command.to_string(),
        seed: config.seed,
        config,
        files: entries,
    };
    let path = dir.join("manifest.json");
    write_json(&path, &manifest)?;
    Ok(path)
}
