use std::collections::HashSet;

use itertools::Itertools;
use tpir_core::layout::binomial;
use tpir_core::SeededRng;

/// All `size`-subsets of `0..n`, or `cap` distinct random ones when there
/// are more than `cap`. Each subset is sorted.
pub fn subsets_capped(n: usize, size: usize, cap: usize, rng: &mut SeededRng) -> Vec<Vec<usize>> {
    let total = binomial(n, size);
    if total <= cap {
        return (0..n).combinations(size).collect();
    }
    let mut seen = HashSet::with_capacity(cap);
    let mut out = Vec::with_capacity(cap);
    while out.len() < cap {
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = i + rng.index(n - i);
            pool.swap(i, j);
        }
        let mut pick = pool[..size].to_vec();
        pick.sort_unstable();
        if seen.insert(pick.clone()) {
            out.push(pick);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_below_cap() {
        let s = subsets_capped(5, 3, 200, &mut SeededRng::new(1));
        assert_eq!(s.len(), 10);
    }

    #[test]
    fn capped_sample_is_distinct() {
        let s = subsets_capped(20, 6, 50, &mut SeededRng::new(1));
        assert_eq!(s.len(), 50);
        let set: HashSet<_> = s.iter().collect();
        assert_eq!(set.len(), 50);
        assert!(s.iter().all(|x| x.len() == 6 && x.windows(2).all(|w| w[0] < w[1])));
    }
}
