//! Verification of the retrieval scheme: rates against capacity, coalition
//! privacy (structural and sampled), the row-mixing invariance that privacy
//! rests on, and exhaustive decoding sweeps.

pub mod capacity;
pub mod correctness;
pub mod empirical;
pub mod grid;
pub mod invariance;
pub mod report;
pub mod structural;
mod subsets;

pub use capacity::{capacity, capacity_from_series, download_cost_per_symbol};
pub use correctness::correctness_sweep;
pub use empirical::empirical_privacy_check;
pub use grid::{default_grid, mds_property_check, rate_vs_capacity_grid};
pub use invariance::mixing_invariance_check;
pub use report::{AuditReport, CheckResult, RateRow, Statistic};
pub use structural::{structural_layout_check, structural_privacy_check};
pub use subsets::subsets_capped;

use tpir_core::scheme::Fault;
use tpir_core::{build_queries_with_fault, sample_secrets, FieldModulus, Result, SchemeParams, SeededRng};

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub seed: u64,
    /// Random stores per correctness sweep.
    pub trials: usize,
    /// Plans per desired index for the sampled privacy test; skipped if `None`.
    pub samples: Option<usize>,
    pub fault: Fault,
    /// Also run the row-mixing invariance check on `GL(alpha, q)`.
    pub invariance: Option<(usize, FieldModulus)>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 10,
            samples: None,
            fault: Fault::None,
            invariance: None,
        }
    }
}

/// Structural privacy for every desired index, rate against capacity, a
/// correctness sweep, and whichever optional checks `options` enables.
pub fn run_audit(params: &SchemeParams, options: &AuditOptions) -> Result<AuditReport> {
    let params = params.with_seed(options.seed);
    let root = SeededRng::new(options.seed);
    let mut report = AuditReport::new(Some(params), options.seed);
    report.rates = rate_vs_capacity_grid(&[params])?;

    let mut rng = root.fork(1);
    let secrets = sample_secrets(&params, &mut rng);
    let mut failures = Vec::new();
    let mut passes = Vec::new();
    for desired in 0..params.messages() {
        let plan = build_queries_with_fault(&params, desired, &secrets, options.fault)?;
        let r = structural_privacy_check(&params, desired, &secrets, &plan)?;
        if r.passed {
            passes.push(r.details);
        } else {
            failures.push(r.details);
        }
    }
    report.add(if failures.is_empty() {
        CheckResult::pass(structural::CHECK_NAME, passes.join("; "))
    } else {
        CheckResult::fail(structural::CHECK_NAME, failures.join("; "))
    })?;

    report.add(correctness_sweep(&params, options.trials, &mut root.fork(2))?)?;

    if let Some(samples) = options.samples {
        let coalition: Vec<usize> = (0..params.colluders()).collect();
        report.add(empirical_privacy_check(
            &params,
            &coalition,
            samples,
            &mut root.fork(3),
            options.fault,
        )?)?;
    }
    if let Some((alpha, q)) = options.invariance {
        report.add(mixing_invariance_check(alpha, q, &mut root.fork(4))?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_audit_passes() {
        let p = SchemeParams::new(2, 3, 2, 4).unwrap();
        let r = run_audit(&p, &AuditOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.render_table());
        assert_eq!(r.checks.len(), 2);
    }

    #[test]
    fn broken_alignment_fails() {
        let p = SchemeParams::new(2, 3, 2, 3).unwrap();
        let options = AuditOptions {
            fault: Fault::UncodedSideInformation,
            ..AuditOptions::default()
        };
        let r = run_audit(&p, &options).unwrap();
        assert!(!r.passed());
        assert!(!r.checks[0].passed);
    }
}
