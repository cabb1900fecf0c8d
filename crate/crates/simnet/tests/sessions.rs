use std::sync::Arc;
use std::time::Duration;

use itertools::Itertools;
use tpir_core::{total_download, MessageStore, SchemeParams, SeededRng};
use tpir_simnet::log::read_records;
use tpir_simnet::*;

fn setup(k: usize, n: usize, t: usize, m: usize, seed: u64) -> (SchemeParams, Arc<MessageStore>) {
    let p = SchemeParams::new(k, n, t, m).unwrap();
    let store = MessageStore::random(&p, &mut SeededRng::new(seed));
    (p, Arc::new(store))
}

#[test]
fn two_silent_of_five() {
    let (p, store) = setup(2, 3, 2, 5, 1);
    let out = run_session(&p, 0, store.clone(), &SessionConfig::with_drop_set(vec![1, 3]), &mut SeededRng::new(2)).unwrap();
    assert_eq!(out.decoded, store.message(0));
    assert_eq!(out.metrics.responders, vec![0, 2, 4]);
    assert_eq!(out.metrics.downloaded_symbols, 15);
    assert_eq!(out.metrics.downloaded_symbols, total_download(&p));
    assert!(out.transcript.entries[1].answer.is_none());
    assert!(out.transcript.entries[3].answer.is_none());
}

#[test]
fn no_drops_uses_lowest_ids() {
    let (p, store) = setup(2, 3, 2, 5, 3);
    let out = run_session(&p, 1, store.clone(), &SessionConfig::default(), &mut SeededRng::new(4)).unwrap();
    assert_eq!(out.decoded, store.message(1));
    assert_eq!(out.metrics.responders, vec![0, 1, 2]);
}

#[test]
fn too_many_drops_rejected() {
    let (p, store) = setup(2, 3, 2, 5, 5);
    let err = run_session(&p, 0, store, &SessionConfig::with_drop_set(vec![0, 1, 2]), &mut SeededRng::new(1)).unwrap_err();
    assert!(matches!(err, SimError::TooManyDropped { dropped: 3, allowed: 2 }));
}

#[test]
fn invalid_drop_ids_rejected() {
    let (p, store) = setup(2, 2, 1, 4, 5);
    assert!(matches!(
        run_session(&p, 0, store.clone(), &SessionConfig::with_drop_set(vec![7]), &mut SeededRng::new(1)),
        Err(SimError::UnknownNode(7))
    ));
    assert!(matches!(
        run_session(&p, 0, store, &SessionConfig::with_drop_set(vec![1, 1]), &mut SeededRng::new(1)),
        Err(SimError::DuplicateNode(1))
    ));
}

#[test]
fn every_legal_drop_set_succeeds() {
    let (p, store) = setup(2, 3, 2, 5, 6);
    let mut count = 0;
    for size in 0..=2 {
        for drop in (0..5).combinations(size) {
            for desired in 0..2 {
                let out = run_session(&p, desired, store.clone(), &SessionConfig::with_drop_set(drop.clone()), &mut SeededRng::new(7)).unwrap();
                assert_eq!(out.decoded, store.message(desired), "drop {drop:?}");
            }
            count += 1;
        }
    }
    assert_eq!(count, 1 + 5 + 10);
}

#[test]
fn replay_reproduces_decode() {
    let (p, store) = setup(3, 2, 1, 3, 8);
    let out = run_session(&p, 2, store.clone(), &SessionConfig::with_drop_set(vec![0]), &mut SeededRng::new(9)).unwrap();
    assert_eq!(replay(&p, 2, &out.secrets, &out.transcript).unwrap(), out.decoded);
}

#[test]
fn queries_do_not_depend_on_store() {
    let (p, store_a) = setup(2, 3, 2, 4, 10);
    let (_, store_b) = setup(2, 3, 2, 4, 11);
    let a = run_session(&p, 0, store_a, &SessionConfig::default(), &mut SeededRng::new(12)).unwrap();
    let b = run_session(&p, 0, store_b, &SessionConfig::default(), &mut SeededRng::new(12)).unwrap();
    for (x, y) in a.transcript.entries.iter().zip(&b.transcript.entries) {
        assert_eq!(x.query, y.query);
    }
    // Same query size whatever the desired index.
    let (_, store) = setup(2, 3, 2, 4, 10);
    let c = run_session(&p, 1, store, &SessionConfig::default(), &mut SeededRng::new(12)).unwrap();
    assert_eq!(a.metrics.upload_bytes, c.metrics.upload_bytes);
}

#[test]
fn repeated_runs_are_identical() {
    let (p, store) = setup(2, 2, 1, 4, 13);
    let cfg = SessionConfig::with_drop_set(vec![2]);
    let a = run_session(&p, 0, store.clone(), &cfg, &mut SeededRng::new(14)).unwrap();
    let b = run_session(&p, 0, store, &cfg, &mut SeededRng::new(14)).unwrap();
    assert_eq!(a.transcript, b.transcript);
    assert_eq!(a.metrics.responders, b.metrics.responders);
}

#[test]
fn latency_mode_takes_first_arrivals() {
    let (p, store) = setup(2, 2, 1, 4, 15);
    let cfg = SessionConfig {
        latency: Some(vec![
            Duration::from_millis(300),
            Duration::from_millis(0),
            Duration::from_millis(150),
            Duration::from_millis(20),
        ]),
        ..SessionConfig::default()
    };
    let out = run_session(&p, 1, store.clone(), &cfg, &mut SeededRng::new(16)).unwrap();
    assert_eq!(out.decoded, store.message(1));
    assert_eq!(out.metrics.responders, vec![1, 3]);
    // The slow answers still land in the transcript.
    assert!(out.transcript.entries.iter().all(|e| e.answer.is_some()));
}

#[test]
fn session_log_omits_desired_index() {
    let dir = tempfile::tempdir().unwrap();
    let (p, store) = setup(2, 3, 2, 4, 17);
    let cfg = SessionConfig {
        drop_set: vec![3],
        log_dir: Some(dir.path().to_path_buf()),
        ..SessionConfig::default()
    };
    run_session(&p, 1, store.clone(), &cfg, &mut SeededRng::new(18)).unwrap();
    let out = run_session(&p, 0, store, &cfg, &mut SeededRng::new(19)).unwrap();
    let records = read_records(dir.path()).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[1].seed, 19);
    assert_eq!(records[1].drop_set, vec![4]);
    assert_eq!(records[1].outcome, "success");
    assert_eq!(records[1].transcript_digest, log::transcript_digest(&out.transcript));
    assert_eq!(records[0].store_digest, records[1].store_digest);
    let raw = std::fs::read_to_string(out.log_path.unwrap()).unwrap();
    assert!(!raw.contains("desired"));
}
