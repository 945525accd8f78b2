//! Append-only JSONL store of computed sweep instances.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use lindim::{ContainmentPolicy, DimensionReport, LinearSystem, OracleConfig, OracleResult};
use serde::{Deserialize, Serialize};

use crate::{Result, VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub system: LinearSystem,
    pub config: OracleConfig,
    pub policy: ContainmentPolicy,
    pub report: DimensionReport,
    pub oracle: OracleResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apolarity: Option<OracleResult>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub system: LinearSystem,
    pub prime_bits: u32,
    pub trials: u32,
    pub seed: u64,
    pub policy: ContainmentPolicy,
    pub version: String,
}

impl CacheKey {
    pub fn new(system: &LinearSystem, config: &OracleConfig, policy: ContainmentPolicy) -> Self {
        CacheKey {
            system: system.clone(),
            prime_bits: config.prime_bits,
            trials: config.trials,
            seed: config.seed,
            policy,
            version: VERSION.to_string(),
        }
    }
}

impl CacheRecord {
    pub fn key(&self) -> CacheKey {
        CacheKey {
            system: self.system.clone(),
            prime_bits: self.config.prime_bits,
            trials: self.config.trials,
            seed: self.config.seed,
            policy: self.policy,
            version: self.version.clone(),
        }
    }
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Records by key plus an optional backing file. Records written by another
/// tool version are kept on disk but never reused.
pub struct Cache {
    path: Option<PathBuf>,
    entries: HashMap<CacheKey, CacheRecord>,
    writer: Option<Mutex<BufWriter<File>>>,
    /// Lines that failed to parse, e.g. a record cut short by a crash.
    pub skipped: usize,
}

impl Cache {
    pub fn in_memory() -> Self {
        Cache {
            path: None,
            entries: HashMap::new(),
            writer: None,
            skipped: 0,
        }
    }

    /// Loads `path` if it exists and opens it for appending.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        let mut skipped = 0;
        let mut needs_newline = false;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheRecord>(&line) {
                    Ok(rec) => {
                        entries.insert(rec.key(), rec);
                    }
                    Err(_) => skipped += 1,
                }
            }
            let bytes = std::fs::read(&path)?;
            needs_newline = bytes.last().is_some_and(|&b| b != b'\n');
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        let mut writer = BufWriter::new(file);
        if needs_newline {
            writer.write_all(b"\n")?;
            writer.flush()?;
        }
        Ok(Cache {
            path: Some(path),
            entries,
            writer: Some(Mutex::new(writer)),
            skipped,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CacheRecord> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, rec: CacheRecord) -> Result<()> {
        if let Some(w) = &self.writer {
            let mut w = w.lock().expect("cache writer poisoned");
            let line = serde_json::to_string(&rec)?;
            w.write_all(line.as_bytes())?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        self.entries.insert(rec.key(), rec);
        Ok(())
    }
}
