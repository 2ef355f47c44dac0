use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use boflow::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub wall_time_seconds: f64,
    /// File name to SHA-256 of its contents.
    pub files: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// An output directory that ends up holding the run's files plus one manifest.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
    warnings: Vec<String>,
    started: Instant,
}

impl OutputDir {
    /// Creates `root`, or reuses it when it is empty or holds a previous run.
    /// Files of a previous run are removed first; anything else is an error.
    pub fn prepare(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        let mut entries: Vec<String> = fs::read_dir(root)?
            .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
            .collect::<std::io::Result<_>>()?;
        entries.sort();
        if !entries.is_empty() {
            let previous = fs::read_to_string(root.join(MANIFEST))
                .ok()
                .and_then(|s| serde_json::from_str::<RunManifest>(&s).ok())
                .ok_or_else(|| {
                    Error::Configuration(format!(
                        "output directory {} is not empty and has no manifest from a previous run",
                        root.display()
                    ))
                })?;
            for name in &entries {
                if name != MANIFEST && !previous.files.contains_key(name) {
                    return Err(Error::Configuration(format!(
                        "output directory {} contains {name}, which no previous run wrote",
                        root.display()
                    )));
                }
            }
            for name in &entries {
                fs::remove_file(root.join(name))?;
            }
        }
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
            warnings: Vec::new(),
            started: Instant::now(),
        })
    }

    /// Path for a new file, recorded for the manifest.
    pub fn file(&mut self, name: &str) -> PathBuf {
        debug_assert!(name != MANIFEST);
        self.files.push(name.to_string());
        self.root.join(name)
    }

    pub fn record(&mut self, names: impl IntoIterator<Item = String>) {
        self.files.extend(names);
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        log::warn!("{msg}");
        self.warnings.push(msg);
    }

    pub fn finish(self, command: &str, config: &impl Serialize) -> Result<()> {
        let mut files = BTreeMap::new();
        for name in &self.files {
            // A kernel can fail between naming a file and writing it.
            let Ok(bytes) = fs::read(self.root.join(name)) else {
                continue;
            };
            files.insert(name.clone(), hex::encode(Sha256::digest(&bytes)));
        }
        let manifest = RunManifest {
            artifact: "boflow".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: serde_json::to_value(config)?,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            files,
            warnings: self.warnings,
        };
        boflow::io::write_json(&self.root.join(MANIFEST), &manifest)
    }
}
