//! Sampling test that a coalition's queries look the same for every desired
//! index.
//!
//! Full query tuples are used as buckets when their support is tiny. Otherwise
//! almost every sample is distinct and a bucket test has no power, so each
//! tuple is reduced to a signature (which messages each row touches, the rank
//! of each message's coefficient rows, the leading coefficient per message)
//! and the signature's 64-bit digest is the bucket. Any function of identically
//! distributed queries is identically distributed, so the reduction cannot
//! cause false alarms.

use std::collections::{BTreeMap, HashMap};

use sha2::{Digest, Sha256};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use tpir_core::layout::binomial;
use tpir_core::scheme::Fault;
use tpir_core::{build_queries_with_fault, sample_secrets, Error, Matrix, QueryPlan, Result, SchemeParams, SeededRng};

use crate::report::{CheckResult, Statistic};

pub const CHECK_NAME: &str = "empirical privacy";

/// Family-wise significance level, split across the pairwise tests.
pub const SIGNIFICANCE: f64 = 0.001;

pub const MIN_SAMPLES: usize = 100;

/// Buckets with fewer combined observations are pooled into one.
const POOL_BELOW: u64 = 10;

/// Query tuples with at most this many bits of support are bucketed exactly.
const EXACT_SUPPORT_BITS: f64 = 16.0;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bucket {
    Exact(Vec<u8>),
    Digest(u64),
}

/// Bucket of the coalition's view of a plan.
pub fn query_bucket(plan: &QueryPlan, coalition: &[usize]) -> Bucket {
    let first = plan.query(coalition[0]);
    let q = first.coefficients.modulus();
    let entries = coalition.len() * first.coefficients.data().len();
    if entries as f64 * (q.value() as f64).log2() <= EXACT_SUPPORT_BITS {
        let mut bytes = Vec::new();
        for &db in coalition {
            for &x in plan.query(db).coefficients.data() {
                q.encode_value(x, &mut bytes);
            }
        }
        return Bucket::Exact(bytes);
    }
    let k_total = first.messages;
    let mut sig = Vec::new();
    let segments: Vec<Vec<Matrix>> = coalition
        .iter()
        .map(|&db| (0..k_total).map(|k| plan.query(db).segment(k)).collect())
        .collect();
    for per_db in &segments {
        for r in 0..per_db[0].rows() {
            let mask: u32 = (0..k_total)
                .filter(|&k| per_db[k].row(r).iter().any(|&x| x != 0))
                .map(|k| 1 << k)
                .sum();
            sig.extend_from_slice(&mask.to_le_bytes());
        }
    }
    for k in 0..k_total {
        let parts: Vec<&Matrix> = segments.iter().map(|s| &s[k]).collect();
        let stacked = Matrix::vstack(&parts).expect("segments share a shape");
        sig.extend_from_slice(&(stacked.rank() as u32).to_le_bytes());
        let lead = stacked.data().iter().copied().find(|&x| x != 0).unwrap_or(0);
        sig.extend_from_slice(&lead.to_le_bytes());
    }
    let digest = Sha256::digest(&sig);
    Bucket::Digest(u64::from_le_bytes(digest[..8].try_into().expect("8 bytes")))
}

/// Two-sample chi-square homogeneity statistic and degrees of freedom.
pub fn homogeneity<K: Ord + Clone + std::hash::Hash>(a: &HashMap<K, u64>, b: &HashMap<K, u64>) -> (f64, usize) {
    let (na, nb) = (a.values().sum::<u64>() as f64, b.values().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return (0.0, 0);
    }
    let mut cells: BTreeMap<&K, (u64, u64)> = BTreeMap::new();
    for (key, &c) in a {
        cells.entry(key).or_default().0 += c;
    }
    for (key, &c) in b {
        cells.entry(key).or_default().1 += c;
    }
    let mut bins = Vec::new();
    let mut pooled = (0u64, 0u64);
    for &(x, y) in cells.values() {
        if x + y < POOL_BELOW {
            pooled.0 += x;
            pooled.1 += y;
        } else {
            bins.push((x, y));
        }
    }
    if pooled.0 + pooled.1 > 0 {
        bins.push(pooled);
    }
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let stat = bins
        .iter()
        .map(|&(x, y)| {
            let d = ka * x as f64 - kb * y as f64;
            d * d / (x + y) as f64
        })
        .sum();
    (stat, bins.len().saturating_sub(1))
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi_square_p_value(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    ChiSquared::new(df as f64).expect("positive df").sf(stat)
}

/// Draws `samples` plans per desired index with fresh secrets and compares
/// the coalition's bucket counts pairwise.
pub fn empirical_privacy_check(
    params: &SchemeParams,
    coalition: &[usize],
    samples: usize,
    rng: &mut SeededRng,
    fault: Fault,
) -> Result<CheckResult> {
    if coalition.len() != params.colluders() {
        return Err(Error::InvalidParams(format!(
            "coalition has {} databases, T = {}",
            coalition.len(),
            params.colluders()
        )));
    }
    let mut sorted = coalition.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != coalition.len() || sorted.iter().any(|&db| db >= params.databases()) {
        return Err(Error::InvalidParams(format!("invalid coalition {coalition:?}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParams(format!(
            "{samples} samples per index is too few for the chi-square test; use at least {MIN_SAMPLES}"
        )));
    }
    let k_total = params.messages();
    let mut counts: Vec<HashMap<Bucket, u64>> = Vec::with_capacity(k_total);
    for desired in 0..k_total {
        let mut c = HashMap::new();
        for _ in 0..samples {
            let secrets = sample_secrets(params, rng);
            let plan = build_queries_with_fault(params, desired, &secrets, fault)?;
            *c.entry(query_bucket(&plan, &sorted)).or_insert(0) += 1;
        }
        counts.push(c);
    }
    let pairs = binomial(k_total, 2).max(1);
    let threshold = SIGNIFICANCE / pairs as f64;
    let mut statistics = Vec::new();
    for a in 0..k_total {
        for b in a + 1..k_total {
            let (stat, df) = homogeneity(&counts[a], &counts[b]);
            statistics.push(Statistic {
                label: format!("desired {} vs {}", a + 1, b + 1),
                chi_square: stat,
                df,
                p_value: chi_square_p_value(stat, df),
                threshold,
            });
        }
    }
    let rejected = statistics.iter().filter(|s| s.p_value <= threshold).count();
    let buckets: usize = counts.iter().map(HashMap::len).max().unwrap_or(0);
    let details = format!(
        "{params} coalition {:?}, {samples} plans per index, up to {buckets} buckets, {rejected} of {} pairs rejected",
        sorted.iter().map(|d| d + 1).collect::<Vec<_>>(),
        statistics.len()
    );
    let mut result = if rejected == 0 {
        CheckResult::pass(CHECK_NAME, details)
    } else {
        CheckResult::fail(CHECK_NAME, details)
    };
    result.statistics = statistics;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneity_identical_and_disjoint() {
        let a: HashMap<u32, u64> = [(1, 50), (2, 50)].into();
        assert_eq!(homogeneity(&a, &a), (0.0, 1));
        let b: HashMap<u32, u64> = [(3, 100)].into();
        let (stat, df) = homogeneity(&a, &b);
        assert_eq!(df, 2);
        assert!((stat - 200.0).abs() < 1e-9);
        assert!(chi_square_p_value(stat, df) < 1e-40);
    }

    #[test]
    fn p_value_matches_reference() {
        // 0.999 quantile of chi2(5).
        assert!((chi_square_p_value(20.515_005_652_432_873, 5) - 0.001).abs() < 1e-9);
    }

    #[test]
    fn small_sample_distinguishes_fault() {
        let p = SchemeParams::new(2, 2, 1, 2).unwrap();
        let mut rng = SeededRng::new(1);
        let ok = empirical_privacy_check(&p, &[0], 1000, &mut rng, Fault::None).unwrap();
        assert!(ok.passed, "{}", ok.details);
        let bad = empirical_privacy_check(&p, &[0], 1000, &mut rng, Fault::UncodedSideInformation).unwrap();
        assert!(!bad.passed, "{}", bad.details);
    }

    #[test]
    fn full_coalition_when_t_equals_n() {
        let p = SchemeParams::new(2, 2, 2, 2).unwrap();
        let r = empirical_privacy_check(&p, &[0, 1], 500, &mut SeededRng::new(2), Fault::None).unwrap();
        assert!(r.passed, "{}", r.details);
        assert_eq!(tpir_core::total_download(&p), 2 * p.message_len());
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = SchemeParams::new(2, 2, 1, 2).unwrap();
        let mut rng = SeededRng::new(1);
        assert!(empirical_privacy_check(&p, &[0], 10, &mut rng, Fault::None).is_err());
        assert!(empirical_privacy_check(&p, &[0, 1], 1000, &mut rng, Fault::None).is_err());
        assert!(empirical_privacy_check(&p, &[5], 1000, &mut rng, Fault::None).is_err());
    }
}
