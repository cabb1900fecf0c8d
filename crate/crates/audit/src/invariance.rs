//! Exhaustive check that mixing rows of a uniform invertible matrix keeps
//! them uniform.
//!
//! For `S` uniform over `GL(alpha, q)`, any invertible `beta x beta` matrix
//! `G` and any `beta` distinct row indices `I`, `G * S[I, :]` has the same
//! distribution as the first `beta` rows of `S`. The check counts both
//! multisets over the whole group.

use std::collections::HashMap;

use itertools::Itertools;
use tpir_core::linalg::enumerate_full_rank;
use tpir_core::{Error, FieldModulus, Matrix, Result, SeededRng};

use crate::report::CheckResult;

/// `q^(alpha^2)` must not exceed this.
pub const ENUMERABLE_LIMIT: f64 = (1u64 << 24) as f64;

/// Above this many `(G, I)` pairs, 100 random pairs are checked instead.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 20_000;

const RANDOM_PAIRS: usize = 100;

type Counts = HashMap<Vec<u64>, u64>;

fn counts(group: &[Matrix], mut f: impl FnMut(&Matrix) -> Matrix) -> Counts {
    let mut c = HashMap::new();
    for s in group {
        *c.entry(f(s).into_data()).or_insert(0) += 1;
    }
    c
}

/// Returns the number of `(G, I)` pairs checked, or the first mismatch.
fn check_beta(group: &[Matrix], alpha: usize, beta: usize, q: FieldModulus, rng: &mut SeededRng) -> Result<Result<usize, String>> {
    let top: Vec<usize> = (0..beta).collect();
    let reference = counts(group, |s| s.select_rows(&top).expect("rows in range"));
    let mixers = enumerate_full_rank(beta, q)?;
    let index_vectors: Vec<Vec<usize>> = (0..alpha).permutations(beta).collect();
    let pairs: Vec<(usize, usize)> = if mixers.len() * index_vectors.len() <= EXHAUSTIVE_PAIR_LIMIT {
        (0..mixers.len()).cartesian_product(0..index_vectors.len()).collect()
    } else {
        (0..RANDOM_PAIRS)
            .map(|_| (rng.index(mixers.len()), rng.index(index_vectors.len())))
            .collect()
    };
    for &(g, i) in &pairs {
        let mixed = counts(group, |s| {
            mixers[g]
                .mat_mul(&s.select_rows(&index_vectors[i]).expect("rows in range"))
                .expect("shapes agree")
        });
        if mixed != reference {
            return Ok(Err(format!(
                "beta={beta}: G={:?} I={:?} changes the distribution",
                mixers[g].data(),
                index_vectors[i]
            )));
        }
    }
    Ok(Ok(pairs.len()))
}

/// Runs every `beta` in `1..=alpha` over all of `GL(alpha, q)`.
pub fn mixing_invariance_check(alpha: usize, q: FieldModulus, rng: &mut SeededRng) -> Result<CheckResult> {
    let name = format!("row-mixing invariance GL({alpha},{q})");
    if alpha == 0 || (q.value() as f64).powi((alpha * alpha) as i32) > ENUMERABLE_LIMIT {
        return Err(Error::TooLarge(format!(
            "GL({alpha},{q}) cannot be enumerated; need q^(alpha^2) <= 2^24"
        )));
    }
    let group = enumerate_full_rank(alpha, q)?;
    let mut checked = Vec::new();
    for beta in 1..=alpha {
        match check_beta(&group, alpha, beta, q, rng)? {
            Ok(n) => checked.push(format!("beta={beta}: {n} (G, I) pairs")),
            Err(msg) => return Ok(CheckResult::fail(name, msg)),
        }
    }
    Ok(CheckResult::pass(
        name,
        format!("{} group elements; {}", group.len(), checked.join(", ")),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u64) -> FieldModulus {
        FieldModulus::new(v).unwrap()
    }

    #[test]
    fn small_groups_pass() {
        for (alpha, p) in [(2, 2), (3, 2), (2, 3)] {
            let r = mixing_invariance_check(alpha, q(p), &mut SeededRng::new(0)).unwrap();
            assert!(r.passed, "{}", r.details);
        }
    }

    #[test]
    fn single_rows_are_uniform_nonzero() {
        // GL(2,2) has 6 elements; each of the 3 nonzero rows leads twice.
        let group = enumerate_full_rank(2, q(2)).unwrap();
        let c = counts(&group, |s| s.select_rows(&[0]).unwrap());
        assert_eq!(c.len(), 3);
        assert!(c.values().all(|&n| n == 2));
        assert!(!c.contains_key(&vec![0, 0]));
    }

    #[test]
    fn singular_mixer_is_detected() {
        // Sanity: a rank-deficient G collapses the distribution.
        let group = enumerate_full_rank(2, q(3)).unwrap();
        let reference = counts(&group, |s| s.clone());
        let g = Matrix::from_rows(q(3), &[[1, 1], [1, 1]]).unwrap();
        let mixed = counts(&group, |s| g.mat_mul(s).unwrap());
        assert_ne!(mixed, reference);
    }

    #[test]
    fn too_large_rejected() {
        assert!(mixing_invariance_check(3, q(7), &mut SeededRng::new(0)).is_err());
    }
}
