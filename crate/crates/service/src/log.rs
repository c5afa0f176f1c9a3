//! Append-only command log with periodic snapshots.
//!
//! `commands.jsonl` holds one executed command per line and is never
//! rewritten, except that a torn final line left by a crash is cut off at
//! startup. `snapshot.json` records the state after the first `log_lines`
//! commands; startup loads it and replays the rest.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::error::ApiError;
use crate::store::{Command, Snapshot, Store};

const LOG: &str = "commands.jsonl";
const SNAPSHOT: &str = "snapshot.json";
const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("data directory: {0}")]
    Io(#[from] io::Error),
    #[error("{file} line {line}: {message}")]
    Corrupt { file: &'static str, line: u64, message: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotFile {
    version: u32,
    log_lines: u64,
    state: Snapshot,
}

pub struct Durable {
    store: Store,
    dir: PathBuf,
    log: File,
    lines: u64,
    snapshot_every: u64,
    since_snapshot: u64,
    /// Set when a write failed; further mutations are refused.
    broken: Option<String>,
}

impl Durable {
    /// Opens or creates the store in `dir`, replaying the log.
    pub fn open(dir: &Path, snapshot_every: u64) -> Result<Durable, StoreError> {
        fs::create_dir_all(dir)?;
        let (mut store, covered) = match fs::read_to_string(dir.join(SNAPSHOT)) {
            Ok(text) => {
                let corrupt = |message: String| StoreError::Corrupt { file: SNAPSHOT, line: 1, message };
                let f: SnapshotFile = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
                if f.version != SNAPSHOT_VERSION {
                    return Err(corrupt(format!("unsupported version {}", f.version)));
                }
                (Store::from_snapshot(&f.state).map_err(corrupt)?, f.log_lines)
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => (Store::new(), 0),
            Err(e) => return Err(e.into()),
        };

        let path = dir.join(LOG);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        let complete = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let mut lines = 0;
        for raw in bytes[..complete].split_inclusive(|&b| b == b'\n') {
            lines += 1;
            if lines <= covered {
                continue;
            }
            let corrupt = |message: String| StoreError::Corrupt { file: LOG, line: lines, message };
            let cmd: Command = serde_json::from_slice(raw).map_err(|e| corrupt(e.to_string()))?;
            store.execute(&cmd).map_err(|e| corrupt(format!("replay failed: {e}")))?;
        }
        if lines < covered {
            return Err(StoreError::Corrupt { file: SNAPSHOT, line: 1, message: format!("covers {covered} commands, log has {lines}") });
        }
        let log = OpenOptions::new().create(true).append(true).open(&path)?;
        if complete < bytes.len() {
            log.set_len(complete as u64)?;
            log.sync_data()?;
        }
        Ok(Durable { store, dir: dir.to_path_buf(), log, lines, snapshot_every, since_snapshot: lines - covered, broken: None })
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// Commands in the log.
    pub fn lines(&self) -> u64 {
        self.lines
    }

    /// Executes a command and, if it succeeds, appends it to the log before
    /// returning.
    pub fn execute(&mut self, cmd: &Command) -> Result<Value, ApiError> {
        if let Some(why) = &self.broken {
            return Err(ApiError::new(503, "Unavailable", format!("store is read-only after a write failure: {why}")));
        }
        let out = self.store.execute(cmd)?;
        if let Err(e) = self.append(cmd) {
            self.broken = Some(e.to_string());
            return Err(ApiError::internal(format!("could not record the change: {e}")));
        }
        if self.snapshot_every > 0 && self.since_snapshot >= self.snapshot_every {
            // A failed snapshot loses nothing: the log still has every command.
            if self.snapshot().is_ok() {
                self.since_snapshot = 0;
            }
        }
        Ok(out)
    }

    fn append(&mut self, cmd: &Command) -> io::Result<()> {
        let mut line = serde_json::to_vec(cmd).expect("commands serialize");
        line.push(b'\n');
        self.log.write_all(&line)?;
        self.log.sync_data()?;
        self.lines += 1;
        self.since_snapshot += 1;
        Ok(())
    }

    /// Writes a snapshot of the current state.
    pub fn snapshot(&mut self) -> io::Result<()> {
        let file = SnapshotFile { version: SNAPSHOT_VERSION, log_lines: self.lines, state: self.store.to_snapshot() };
        let tmp = self.dir.join(format!("{SNAPSHOT}.tmp"));
        let mut f = File::create(&tmp)?;
        f.write_all(&serde_json::to_vec(&file).expect("snapshots serialize"))?;
        f.sync_all()?;
        fs::rename(&tmp, self.dir.join(SNAPSHOT))?;
        File::open(&self.dir)?.sync_all()
    }
}
