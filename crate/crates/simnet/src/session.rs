use std::path::PathBuf;
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use tpir_core::wire::{decode_answer, encode_query};
use tpir_core::{
    build_queries, sample_secrets, total_download, Answer, Decoder, MessageStore, SchemeParams, SchemeSecrets,
    SeededRng,
};

use crate::error::{SimError, SimResult};
use crate::log::{append_record, log_dir_from_env, store_digest, transcript_digest, unix_time, SessionRecord};
use crate::node::{Behavior, DatabaseNode};

#[derive(Clone, Debug, Default)]
pub struct SessionConfig {
    /// 0-based ids of databases that stay silent.
    pub drop_set: Vec<usize>,
    /// Per-database answer delays. When set, the first `N` answers to
    /// arrive are decoded instead of the `N` lowest ids.
    pub latency: Option<Vec<Duration>>,
    pub log_dir: Option<PathBuf>,
}

impl SessionConfig {
    pub fn with_drop_set(drop_set: Vec<usize>) -> Self {
        Self {
            drop_set,
            ..Self::default()
        }
    }

    /// Logs to `TPIR_LOG_DIR` when it is set.
    pub fn from_env(drop_set: Vec<usize>) -> Self {
        Self {
            drop_set,
            log_dir: log_dir_from_env(),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub db: usize,
    pub query: Vec<u8>,
    pub answer: Option<Vec<u8>>,
}

/// Every byte exchanged, ordered by database id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn upload_bytes(&self) -> usize {
        self.entries.iter().map(|e| e.query.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    /// Symbols downloaded from the responders used for decoding.
    pub downloaded_symbols: usize,
    pub upload_bytes: usize,
    pub download_bytes: usize,
    /// 0-based ids whose answers were decoded.
    pub responders: Vec<usize>,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct SessionOutcome {
    pub decoded: Vec<u64>,
    pub secrets: SchemeSecrets,
    pub transcript: Transcript,
    pub metrics: Metrics,
    pub log_path: Option<PathBuf>,
}

fn validate_drop_set(params: &SchemeParams, drop_set: &[usize]) -> SimResult<()> {
    let mut seen = vec![false; params.databases()];
    for &db in drop_set {
        if db >= params.databases() {
            return Err(SimError::UnknownNode(db));
        }
        if std::mem::replace(&mut seen[db], true) {
            return Err(SimError::DuplicateNode(db));
        }
    }
    let allowed = params.databases() - params.responders();
    if drop_set.len() > allowed {
        return Err(SimError::TooManyDropped {
            dropped: drop_set.len(),
            allowed,
        });
    }
    Ok(())
}

/// Sends queries to all `M` nodes, lets them answer concurrently, and
/// decodes message `desired` from `N` answers.
pub fn run_session(
    params: &SchemeParams,
    desired: usize,
    store: Arc<MessageStore>,
    config: &SessionConfig,
    rng: &mut SeededRng,
) -> SimResult<SessionOutcome> {
    validate_drop_set(params, &config.drop_set)?;
    if let Some(delays) = &config.latency {
        if delays.len() != params.databases() {
            return Err(tpir_core::Error::InvalidParams(format!(
                "{} delays for {} databases",
                delays.len(),
                params.databases()
            ))
            .into());
        }
    }
    let started = Instant::now();
    let seed = rng.seed();
    let secrets = sample_secrets(params, rng);
    let plan = build_queries(params, desired, &secrets)?;
    let queries: Vec<Vec<u8>> = plan.queries().iter().map(encode_query).collect();

    let nodes: Vec<DatabaseNode> = (0..params.databases())
        .map(|id| {
            let behavior = if config.drop_set.contains(&id) {
                Behavior::Silent
            } else if let Some(delays) = &config.latency {
                Behavior::Delayed(delays[id])
            } else {
                Behavior::Responsive
            };
            DatabaseNode::new(id, Arc::clone(&store), behavior)
        })
        .collect();

    let mut answers: Vec<Option<Vec<u8>>> = vec![None; nodes.len()];
    let mut arrival = Vec::new();
    thread::scope(|scope| -> SimResult<()> {
        let (tx, rx) = mpsc::channel();
        for (node, query) in nodes.iter().zip(&queries) {
            let tx = tx.clone();
            scope.spawn(move || {
                let _ = tx.send((node.id, node.respond(query)));
            });
        }
        drop(tx);
        for (db, reply) in rx {
            if let Some(reply) = reply {
                answers[db] = Some(reply?);
                arrival.push(db);
            }
        }
        Ok(())
    })?;

    let n = params.responders();
    let mut responders: Vec<usize> = if config.latency.is_some() {
        arrival.iter().copied().take(n).collect()
    } else {
        (0..nodes.len()).filter(|&db| answers[db].is_some()).take(n).collect()
    };
    responders.sort_unstable();
    if responders.len() < n {
        return Err(SimError::NotEnoughResponders {
            needed: n,
            got: responders.len(),
        });
    }
    let transcript = Transcript {
        entries: queries
            .into_iter()
            .zip(answers)
            .enumerate()
            .map(|(db, (query, answer))| TranscriptEntry { db, query, answer })
            .collect(),
    };
    let decoded = decode_from(params, desired, &secrets, &transcript, &responders)?;
    let download_bytes = responders
        .iter()
        .map(|&db| transcript.entries[db].answer.as_ref().map_or(0, Vec::len))
        .sum();
    let metrics = Metrics {
        downloaded_symbols: responders.len() * plan.layout().per_db_rows,
        upload_bytes: transcript.upload_bytes(),
        download_bytes,
        responders,
        wall_time: started.elapsed(),
    };
    debug_assert_eq!(metrics.downloaded_symbols, total_download(params));

    let log_path = match &config.log_dir {
        Some(dir) => {
            let outcome = if decoded == store.message(desired) { "success" } else { "mismatch" };
            let record = SessionRecord {
                timestamp: unix_time(),
                messages: params.messages(),
                responders: params.responders(),
                colluders: params.colluders(),
                databases: params.databases(),
                modulus: params.modulus().value(),
                seed,
                drop_set: config.drop_set.iter().map(|d| d + 1).collect(),
                store_digest: store_digest(&store),
                transcript_digest: transcript_digest(&transcript),
                outcome: outcome.into(),
            };
            Some(append_record(dir, &record)?)
        }
        None => None,
    };

    Ok(SessionOutcome {
        decoded,
        secrets,
        transcript,
        metrics,
        log_path,
    })
}

fn decode_from(
    params: &SchemeParams,
    desired: usize,
    secrets: &SchemeSecrets,
    transcript: &Transcript,
    responders: &[usize],
) -> SimResult<Vec<u64>> {
    let answers = responders
        .iter()
        .map(|&db| {
            let bytes = transcript.entries[db]
                .answer
                .as_ref()
                .ok_or(SimError::NotEnoughResponders {
                    needed: params.responders(),
                    got: 0,
                })?;
            let a = decode_answer(bytes, params.modulus())?;
            if a.db != db {
                return Err(tpir_core::Error::Invariant(format!("answer from {} labelled {}", db + 1, a.db + 1)).into());
            }
            Ok(a)
        })
        .collect::<SimResult<Vec<Answer>>>()?;
    Ok(Decoder::new(params, desired, secrets)?.decode(&answers)?)
}

/// Decodes again from the answer bytes recorded in a transcript, using the
/// `N` lowest ids that answered.
pub fn replay(
    params: &SchemeParams,
    desired: usize,
    secrets: &SchemeSecrets,
    transcript: &Transcript,
) -> SimResult<Vec<u64>> {
    let answered: Vec<usize> = transcript
        .entries
        .iter()
        .filter(|e| e.answer.is_some())
        .map(|e| e.db)
        .take(params.responders())
        .collect();
    if answered.len() < params.responders() {
        return Err(SimError::NotEnoughResponders {
            needed: params.responders(),
            got: answered.len(),
        });
    }
    decode_from(params, desired, secrets, transcript, &answered)
}
