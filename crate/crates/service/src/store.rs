use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use hybridauth_core::biometric::Trace;
use hybridauth_core::Challenge;
use serde::{Deserialize, Serialize};

use crate::config::ServiceConfig;
use crate::service::{RoundOutcome, Verdict};
use crate::ServiceError;

/// One line of the append-only log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Setup {
        config: ServiceConfig,
    },
    Enroll {
        user: String,
        secret: Vec<usize>,
        renderings: Vec<Trace>,
    },
    Session {
        session: String,
        user: String,
        seed: u64,
    },
    Round {
        session: String,
        round: u32,
        challenge: Challenge,
        /// `None` when the submitted trace did not parse.
        trace: Option<Trace>,
        /// Symbol an observer would read from the rendering.
        observed: Option<u32>,
        outcome: RoundOutcome,
    },
    Verdict {
        session: String,
        verdict: Verdict,
    },
}

/// Append-only record log, in memory and optionally mirrored to a JSON-lines
/// file. Appends are serialized by one lock; each record is written with a
/// single `write_all` of a complete line.
#[derive(Debug)]
pub struct Store {
    inner: Mutex<Inner>,
}

#[derive(Debug)]
struct Inner {
    records: Vec<Record>,
    file: Option<(PathBuf, File)>,
    retain: bool,
}

impl Store {
    pub fn memory() -> Self {
        Self { inner: Mutex::new(Inner { records: Vec::new(), file: None, retain: true }) }
    }

    /// Keeps nothing after setup. For load tests where the log would not fit
    /// in memory; export and replay see only the setup record.
    pub fn null() -> Self {
        Self { inner: Mutex::new(Inner { records: Vec::new(), file: None, retain: false }) }
    }

    /// Opens (or creates) a log file and loads its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, ServiceError> {
        let path = path.as_ref().to_path_buf();
        let io = |e: std::io::Error| ServiceError::Store(format!("{}: {e}", path.display()));
        let mut records = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let record = serde_json::from_str(&line)
                    .map_err(|e| ServiceError::Store(format!("{} line {}: {e}", path.display(), i + 1)))?;
                records.push(record);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        Ok(Self { inner: Mutex::new(Inner { records, file: Some((path, file)), retain: true }) })
    }

    pub fn append(&self, record: Record) -> Result<(), ServiceError> {
        let mut inner = self.inner.lock().expect("store lock");
        if let Some((path, file)) = inner.file.as_mut() {
            let mut line = serde_json::to_string(&record).expect("records serialize");
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| ServiceError::Store(format!("{}: {e}", path.display())))?;
        }
        if inner.retain || matches!(record, Record::Setup { .. }) {
            inner.records.push(record);
        }
        Ok(())
    }

    pub fn records(&self) -> Vec<Record> {
        self.inner.lock().expect("store lock").records.clone()
    }

    pub(crate) fn with_records<T>(&self, f: impl FnOnce(&[Record]) -> T) -> T {
        f(&self.inner.lock().expect("store lock").records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        let store = Store::open(&path).unwrap();
        store.append(Record::Session { session: "s".into(), user: "u".into(), seed: 7 }).unwrap();
        store.append(Record::Verdict { session: "s".into(), verdict: Verdict::Reject }).unwrap();
        drop(store);
        let again = Store::open(&path).unwrap();
        assert_eq!(again.records().len(), 2);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), r#"{"kind":"session","session":"s","user":"u","seed":7}"#);
    }

    #[test]
    fn corrupt_line_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        std::fs::write(&path, "{\"kind\":\"nope\"}\n").unwrap();
        let err = Store::open(&path).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }
}
