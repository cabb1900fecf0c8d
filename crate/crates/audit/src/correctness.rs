use tpir_core::scheme::{answer_batch, Decoder};
use tpir_core::{build_queries, sample_secrets, Matrix, MessageStore, Result, SchemeParams, SeededRng};

use crate::report::CheckResult;
use crate::subsets::subsets_capped;

pub const CHECK_NAME: &str = "correctness";

/// More responder subsets than this are sampled instead of enumerated.
pub const RESPONDER_SUBSET_CAP: usize = 200;

/// Decodes `trials` random stores for every desired index from every
/// `N`-subset of responders (or a capped random sample of them).
pub fn correctness_sweep(params: &SchemeParams, trials: usize, rng: &mut SeededRng) -> Result<CheckResult> {
    let root_seed = rng.seed();
    let secrets = sample_secrets(params, rng);
    let stores: Vec<MessageStore> = (0..trials.max(1)).map(|_| MessageStore::random(params, rng)).collect();
    let stacked = MessageStore::stack_columns(&stores)?;
    let subsets = subsets_capped(params.databases(), params.responders(), RESPONDER_SUBSET_CAP, rng);
    let mut decodes = 0usize;
    for desired in 0..params.messages() {
        let plan = build_queries(params, desired, &secrets)?;
        let answers: Vec<(usize, Matrix)> = plan
            .queries()
            .iter()
            .enumerate()
            .map(|(db, query)| Ok((db, answer_batch(query, &stacked)?)))
            .collect::<Result<_>>()?;
        let decoder = Decoder::new(params, desired, &secrets)?;
        for subset in &subsets {
            let chosen: Vec<(usize, Matrix)> = subset.iter().map(|&db| answers[db].clone()).collect();
            let out = decoder.decode_batch(&chosen)?;
            for (c, store) in stores.iter().enumerate() {
                let ok = (0..out.rows()).all(|r| out.raw(r, c) == store.message(desired)[r]);
                if !ok {
                    return Ok(CheckResult::fail(
                        CHECK_NAME,
                        format!(
                            "{params}: seed {root_seed}, desired {}, responders {:?}, store {c} decoded wrongly",
                            desired + 1,
                            subset.iter().map(|d| d + 1).collect::<Vec<_>>()
                        ),
                    ));
                }
                decodes += 1;
            }
        }
    }
    Ok(CheckResult::pass(
        CHECK_NAME,
        format!(
            "{params}: {decodes} exact decodes ({} stores x {} indices x {} responder sets)",
            stores.len(),
            params.messages(),
            subsets.len()
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_points_pass() {
        for (k, n, t, m, trials) in [(2, 3, 2, 3, 50), (2, 3, 2, 5, 3), (1, 2, 1, 2, 5), (3, 2, 2, 4, 2)] {
            let p = SchemeParams::new(k, n, t, m).unwrap();
            let r = correctness_sweep(&p, trials, &mut SeededRng::new(9)).unwrap();
            assert!(r.passed, "{}", r.details);
        }
    }
}
