//! Append-only session log, one JSON object per line. The desired index is
//! never written; stores and transcripts appear only as digests.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tpir_core::MessageStore;

use crate::error::SimResult;
use crate::session::Transcript;

pub const LOG_DIR_ENV: &str = "TPIR_LOG_DIR";
pub const LOG_FILE: &str = "sessions.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub timestamp: u64,
    pub messages: usize,
    pub responders: usize,
    pub colluders: usize,
    pub databases: usize,
    pub modulus: u64,
    pub seed: u64,
    /// 1-based ids of silent databases.
    pub drop_set: Vec<usize>,
    pub store_digest: String,
    pub transcript_digest: String,
    pub outcome: String,
}

pub fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub fn store_digest(store: &MessageStore) -> String {
    let mut h = Sha256::new();
    let q = store.modulus();
    h.update(q.value().to_le_bytes());
    let mut buf = Vec::new();
    for m in store.messages() {
        for &x in m {
            q.encode_value(x, &mut buf);
        }
    }
    h.update(&buf);
    hex::encode(h.finalize())
}

pub fn transcript_digest(transcript: &Transcript) -> String {
    let mut h = Sha256::new();
    for e in &transcript.entries {
        h.update((e.db as u64).to_le_bytes());
        h.update((e.query.len() as u64).to_le_bytes());
        h.update(&e.query);
        match &e.answer {
            Some(a) => {
                h.update([1]);
                h.update((a.len() as u64).to_le_bytes());
                h.update(a);
            }
            None => h.update([0]),
        }
    }
    hex::encode(h.finalize())
}

/// Directory from `TPIR_LOG_DIR`, if set and non-empty.
pub fn log_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(LOG_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn append_record(dir: &Path, record: &SessionRecord) -> SimResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(LOG_FILE);
    let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
    writeln!(f, "{}", serde_json::to_string(record)?)?;
    Ok(path)
}

pub fn read_records(dir: &Path) -> SimResult<Vec<SessionRecord>> {
    let text = fs::read_to_string(dir.join(LOG_FILE))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}
