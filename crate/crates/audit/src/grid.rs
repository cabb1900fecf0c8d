//! Parameter grids, rate comparisons and code checks over them.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_rational::Ratio;
use tpir_core::mds::generator;
use tpir_core::{achieved_rate, build_layout, FieldModulus, Matrix, MdsSpec, Result, SchemeParams, SeededRng};

use crate::capacity::capacity;
use crate::report::{CheckResult, RateRow};

/// `K in 1..=4`, `N in 2..=5`, `T in 1..=N`, `M in {N, N+1, N+2}`.
pub fn default_grid() -> Vec<SchemeParams> {
    let mut out = Vec::new();
    for k in 1..=4 {
        for n in 2..=5 {
            for t in 1..=n {
                for m in n..=n + 2 {
                    out.push(SchemeParams::new(k, n, t, m).expect("grid parameters are valid"));
                }
            }
        }
    }
    out
}

/// Rate from counting the blocks of an actual layout.
pub fn layout_rate(params: &SchemeParams) -> Result<Ratio<u128>> {
    let layout = build_layout(params, 0)?;
    let rows: usize = layout.blocks.iter().map(|b| b.per_db).sum();
    Ok(Ratio::new(
        params.message_len() as u128,
        (params.responders() * rows) as u128,
    ))
}

pub fn rate_vs_capacity_grid(grid: &[SchemeParams]) -> Result<Vec<RateRow>> {
    grid.iter()
        .map(|p| {
            let achieved = layout_rate(p)?;
            let cap = capacity(p.messages(), p.responders(), p.colluders())?;
            Ok(RateRow {
                messages: p.messages(),
                responders: p.responders(),
                colluders: p.colluders(),
                databases: p.databases(),
                achieved: achieved.to_string(),
                capacity: cap.to_string(),
                equal: achieved == cap && achieved_rate(p) == cap,
            })
        })
        .collect()
}

/// Rates that differ between grid points sharing `(K, N, T)`.
pub fn rate_depends_on_databases(rows: &[RateRow]) -> Vec<(usize, usize, usize)> {
    rows.iter()
        .into_group_map_by(|r| (r.messages, r.responders, r.colluders))
        .into_iter()
        .filter(|(_, g)| g.iter().map(|r| &r.achieved).unique().count() > 1)
        .map(|(key, _)| key)
        .sorted()
        .collect()
}

/// Strictly decreasing in `T` and `K`, strictly increasing in `N` (for
/// `K >= 2`), and approaching `1 - T/N` monotonically as `K` grows.
pub fn capacity_shape_check(max_messages: usize, max_responders: usize) -> Result<CheckResult> {
    let name = "capacity monotonicity";
    let mut problems = Vec::new();
    for k in 2..=max_messages {
        for n in 1..=max_responders {
            for t in 1..=n {
                let c = capacity(k, n, t)?;
                if t < n && capacity(k, n, t + 1)? >= c {
                    problems.push(format!("not decreasing in T at K={k} N={n} T={t}"));
                }
                if capacity(k, n + 1, t)? <= c {
                    problems.push(format!("not increasing in N at K={k} N={n} T={t}"));
                }
                if k < max_messages && capacity(k + 1, n, t)? >= c {
                    problems.push(format!("not decreasing in K at K={k} N={n} T={t}"));
                }
                if t < n {
                    let limit = Ratio::new((n - t) as u128, n as u128);
                    let gap = c - limit;
                    if gap <= Ratio::from_integer(0) {
                        problems.push(format!("not above its limit at K={k} N={n} T={t}"));
                    }
                    if k < max_messages && capacity(k + 1, n, t)? - limit >= gap {
                        problems.push(format!("gap to limit not shrinking at K={k} N={n} T={t}"));
                    }
                }
            }
        }
    }
    Ok(if problems.is_empty() {
        CheckResult::pass(name, format!("K <= {max_messages}, N <= {max_responders}"))
    } else {
        CheckResult::fail(name, problems.join("; "))
    })
}

/// Every code shape `(n, k, q)` any layout in the grid uses.
pub fn grid_code_specs(grid: &[SchemeParams]) -> BTreeSet<(usize, usize, u64)> {
    let mut out = BTreeSet::new();
    for p in grid {
        let q = p.modulus().value();
        for j in 1..p.messages() {
            if let Some(c) = p.undesired_code(j) {
                out.insert((c.len, c.info, q));
            }
        }
        let d = p.desired_code();
        out.insert((d.len, d.info, q));
    }
    out
}

/// Codes up to this length are checked over all `C(n, k)` row subsets.
pub const EXHAUSTIVE_MAX_N: usize = 12;
pub const RANDOM_SUBSETS: usize = 1000;
/// Random subsets of larger dimension use the closed-form Vandermonde determinant.
pub const ELIMINATION_MAX_K: usize = 64;

/// Checks that `k`-row submatrices of the generator are invertible.
///
/// Large `k`: the generator is first verified entrywise to be the Vandermonde
/// matrix on nodes `0..n`; a square submatrix on nodes `x_a` then has
/// determinant `prod (x_b - x_a)`, nonzero when the nodes are distinct mod q.
/// One subset is also eliminated directly as a cross-check.
pub fn mds_property_check(spec: MdsSpec, rng: &mut SeededRng) -> Result<CheckResult> {
    let name = format!("MDS ({}, {}) over GF({})", spec.n, spec.k, spec.modulus);
    let g = &generator(spec)?;
    let full_rank = |rows: &[usize]| -> Result<bool> { Ok(g.select_rows(rows)?.rank() == spec.k) };
    if spec.n <= EXHAUSTIVE_MAX_N {
        let mut count = 0;
        for rows in (0..spec.n).combinations(spec.k) {
            if !full_rank(&rows)? {
                return Ok(CheckResult::fail(name, format!("rows {rows:?} singular")));
            }
            count += 1;
        }
        return Ok(CheckResult::pass(name, format!("all {count} subsets invertible")));
    }
    let subsets: Vec<Vec<usize>> = (0..RANDOM_SUBSETS)
        .map(|_| {
            let mut pool: Vec<usize> = (0..spec.n).collect();
            for i in 0..spec.k {
                let j = i + rng.index(spec.n - i);
                pool.swap(i, j);
            }
            pool.truncate(spec.k);
            pool
        })
        .collect();
    if spec.k <= ELIMINATION_MAX_K {
        for rows in &subsets {
            if !full_rank(rows)? {
                return Ok(CheckResult::fail(name, format!("rows {rows:?} singular")));
            }
        }
        return Ok(CheckResult::pass(name, format!("{RANDOM_SUBSETS} random subsets invertible by elimination")));
    }
    if !is_vandermonde(g, spec.modulus) {
        return Ok(CheckResult::fail(name, "generator is not the Vandermonde matrix on 0..n"));
    }
    for rows in &subsets {
        if vandermonde_determinant(rows, spec.modulus) == 0 {
            return Ok(CheckResult::fail(name, format!("rows {rows:?} have zero determinant")));
        }
    }
    if !full_rank(&subsets[0])? {
        return Ok(CheckResult::fail(name, "elimination cross-check found a singular subset"));
    }
    Ok(CheckResult::pass(
        name,
        format!("{RANDOM_SUBSETS} random subsets by determinant formula, 1 by elimination"),
    ))
}

fn is_vandermonde(g: &Matrix, q: FieldModulus) -> bool {
    (0..g.rows()).all(|i| {
        let mut power = 1 % q.value();
        (0..g.cols()).all(|j| {
            let ok = g.raw(i, j) == power;
            power = q.mul(power, i as u64);
            ok
        })
    })
}

/// `prod_{a < b} (x_b - x_a)` for the nodes `x = rows`.
pub fn vandermonde_determinant(nodes: &[usize], q: FieldModulus) -> u64 {
    let mut det = 1 % q.value();
    for (a, &xa) in nodes.iter().enumerate() {
        for &xb in &nodes[a + 1..] {
            det = q.mul(det, q.sub(q.reduce(xb as u64), q.reduce(xa as u64)));
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size() {
        assert_eq!(default_grid().len(), 4 * (2 + 3 + 4 + 5) * 3);
    }

    #[test]
    fn rates_match_and_ignore_m() {
        let rows = rate_vs_capacity_grid(&default_grid()).unwrap();
        assert!(rows.iter().all(|r| r.equal));
        assert!(rate_depends_on_databases(&rows).is_empty());
        let r: Vec<&RateRow> = rows
            .iter()
            .filter(|r| (r.messages, r.responders, r.colluders) == (2, 3, 2))
            .collect();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|r| r.achieved == "3/5"));
    }

    #[test]
    fn capacity_shape() {
        let c = capacity_shape_check(12, 8).unwrap();
        assert!(c.passed, "{}", c.details);
    }

    #[test]
    fn determinant_formula_matches_elimination() {
        let q = FieldModulus::new(31).unwrap();
        let spec = MdsSpec::new(20, 5, q).unwrap();
        let g = generator(spec).unwrap();
        let mut rng = SeededRng::new(3);
        for _ in 0..50 {
            let rows: Vec<usize> = (0..5).map(|_| rng.index(20)).collect();
            let det = vandermonde_determinant(&rows, q);
            let rank = g.select_rows(&rows).unwrap().rank();
            assert_eq!(det != 0, rank == 5, "{rows:?}");
        }
    }

    #[test]
    fn mds_checks_small_and_large() {
        let mut rng = SeededRng::new(1);
        for (n, k, q) in [(9, 6, 11), (18, 12, 19), (100, 70, 101)] {
            let spec = MdsSpec::new(n, k, FieldModulus::new(q).unwrap()).unwrap();
            let r = mds_property_check(spec, &mut rng).unwrap();
            assert!(r.passed, "{}", r.details);
        }
    }
}
