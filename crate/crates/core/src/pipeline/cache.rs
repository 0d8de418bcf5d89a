use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::Invariants;
use crate::notation::PdCode;

/// Hex sha256 of the canonical PD rendering.
pub fn digest(pd: &PdCode) -> String {
    hex::encode(Sha256::digest(pd.canonical().render().as_bytes()))
}

/// JSON-lines store of invariants keyed by [`digest`]. One writer at a time;
/// each `put` appends a single line.
#[derive(Debug)]
pub struct InvariantCache {
    path: PathBuf,
    entries: HashMap<String, Invariants>,
    warnings: Vec<String>,
}

impl InvariantCache {
    /// Loads `path`; a missing file is an empty cache and an unreadable line
    /// discards the file with a warning.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = InvariantCache {
            path,
            entries: HashMap::new(),
            warnings: Vec::new(),
        };
        let file = match File::open(&cache.path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Invariants>(&line) {
                Ok(inv) => {
                    cache.entries.insert(inv.digest.clone(), inv);
                }
                Err(e) => {
                    let msg = format!(
                        "cache {} is corrupt at line {}: {e}; rebuilding",
                        cache.path.display(),
                        i + 1
                    );
                    log::warn!("{msg}");
                    cache.warnings.push(msg);
                    cache.entries.clear();
                    fs::write(&cache.path, b"")?;
                    break;
                }
            }
        }
        Ok(cache)
    }

    pub fn get(&self, digest: &str) -> Option<&Invariants> {
        self.entries.get(digest)
    }

    /// Stores `inv` unless an identical record is already present.
    pub fn put(&mut self, inv: Invariants) -> io::Result<()> {
        if self.entries.get(&inv.digest) == Some(&inv) {
            return Ok(());
        }
        let mut line = serde_json::to_string(&inv).map_err(io::Error::other)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.write_all(line.as_bytes())?;
        self.entries.insert(inv.digest.clone(), inv);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}
