//! On-disk cache: the ingested catalog as canonical JSON and an append-only
//! JSON-lines file of result records keyed by canonical PD text.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

pub const CATALOG_FILE: &str = "catalog.json";
pub const RESULTS_FILE: &str = "results.jsonl";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| {
            CliError::Input(format!("cannot create cache dir {}: {e}", dir.display()))
        })?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    pub fn catalog_path(&self) -> PathBuf {
        self.dir.join(CATALOG_FILE)
    }

    fn results_path(&self) -> PathBuf {
        self.dir.join(RESULTS_FILE)
    }

    pub fn read_catalog(&self) -> Result<Option<String>, CliError> {
        match fs::read_to_string(self.catalog_path()) {
            Ok(text) => Ok(Some(text)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_error(&self.catalog_path(), e)),
        }
    }

    /// Replaces the catalog atomically.
    pub fn write_catalog(&self, json: &str) -> Result<(), CliError> {
        let tmp = self
            .dir
            .join(format!("{CATALOG_FILE}.tmp{}", std::process::id()));
        fs::write(&tmp, json).map_err(|e| io_error(&tmp, e))?;
        fs::rename(&tmp, self.catalog_path()).map_err(|e| io_error(&self.catalog_path(), e))
    }

    fn records_locked(file: &File) -> Result<Vec<Value>, CliError> {
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| CliError::Input(format!("reading results: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            // A torn or foreign line is skipped rather than poisoning the cache.
            if let Ok(v) = serde_json::from_str::<Value>(&line) {
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn lookup(&self, canonical: &str) -> Result<Option<Value>, CliError> {
        let path = self.results_path();
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_error(&path, e)),
        };
        file.lock_shared().map_err(|e| io_error(&path, e))?;
        let found = Self::records_locked(&file)?
            .into_iter()
            .find(|r| r.get("canonical").and_then(Value::as_str) == Some(canonical));
        Ok(found)
    }

    /// Appends the records whose canonical form is not yet present. Returns
    /// the number written.
    pub fn append_new(&self, records: &[Value]) -> Result<usize, CliError> {
        let path = self.results_path();
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(|e| io_error(&path, e))?;
        file.lock().map_err(|e| io_error(&path, e))?;
        let mut seen: HashSet<String> = Self::records_locked(&file)?
            .iter()
            .filter_map(|r| {
                r.get("canonical")
                    .and_then(Value::as_str)
                    .map(str::to_owned)
            })
            .collect();
        let mut buf = String::new();
        let mut written = 0;
        for r in records {
            let Some(key) = r.get("canonical").and_then(Value::as_str) else {
                continue;
            };
            if seen.insert(key.to_owned()) {
                buf.push_str(&r.to_string());
                buf.push('\n');
                written += 1;
            }
        }
        file.write_all(buf.as_bytes())
            .map_err(|e| io_error(&path, e))?;
        Ok(written)
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// `--cache-dir`, then the environment variable (both handled by clap), then
/// the user cache directory.
pub fn default_dir() -> PathBuf {
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(xdg).join("knotwidth");
    }
    if let Some(home) = std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(home).join(".cache").join("knotwidth");
    }
    PathBuf::from(".knotwidth")
}
