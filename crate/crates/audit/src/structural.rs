//! Coalition-level privacy checks on the query structure.
//!
//! For every `T`-subset of databases: each undesired codeword is seen at
//! exactly `a_j` coordinates whose generator rows are invertible, the desired
//! codeword is seen through full-row-rank generator rows, and every message
//! contributes exactly `T N^(K-1)` variables. With uniform secrets this makes
//! the coalition's view independent of the desired index.

use std::collections::HashMap;

use tpir_core::layout::BlockRole;
use tpir_core::scheme::{CodeBook, Fault};
use tpir_core::{build_layout, BlockLayout, MdsCode, QueryPlan, Result, SchemeParams, SchemeSecrets, SeededRng};

use crate::report::CheckResult;
use crate::subsets::subsets_capped;

pub const CHECK_NAME: &str = "structural privacy";

/// More `T`-subsets than this are sampled instead of enumerated.
pub const COALITION_CAP: usize = 500;

/// Plans with messages up to this length also get a direct rank check on
/// the coalition's coefficient rows.
pub const PLAN_RANK_MAX_LEN: usize = 64;

const REPORTED_FAILURES: usize = 5;

#[derive(Default)]
struct Checker {
    ranks: HashMap<(usize, Vec<usize>), usize>,
    failures: Vec<String>,
    failure_count: usize,
    checked: usize,
}

impl Checker {
    fn rank(&mut self, slot: usize, code: &MdsCode, coords: &[usize]) -> Result<usize> {
        let key = (slot, coords.to_vec());
        if let Some(&r) = self.ranks.get(&key) {
            return Ok(r);
        }
        let r = code.generator().select_rows(coords)?.rank();
        self.ranks.insert(key, r);
        Ok(r)
    }

    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < REPORTED_FAILURES {
            self.failures.push(msg);
        }
    }

    fn layout(&mut self, layout: &BlockLayout, codes: &CodeBook, coalition: &[usize]) -> Result<()> {
        let p = &layout.params;
        let per_message = p.colluders() * p.responders().pow(p.messages() as u32 - 1);
        let who = format!("desired {} coalition {}", layout.desired() + 1, names(coalition));
        let mut seen = vec![0usize; p.messages()];
        for (b, block) in layout.blocks.iter().enumerate() {
            if !matches!(block.role, BlockRole::Undesired) || block.is_empty() {
                continue;
            }
            let Some(code) = codes.for_size(block.size()) else {
                self.fail(format!("{who}: block {} has no code", block.subset));
                continue;
            };
            let coords = layout.codeword_coords(b, coalition);
            let expected = p.info_len(block.size());
            if coords.len() != expected {
                self.fail(format!(
                    "{who}: block {} exposes {} codeword coordinates, expected {expected}",
                    block.subset,
                    coords.len()
                ));
            } else if self.rank(block.size(), code, &coords)? != expected {
                self.fail(format!(
                    "{who}: block {} generator rows {coords:?} are singular",
                    block.subset
                ));
            }
            for &k in block.subset.members() {
                seen[k] += coords.len();
            }
        }
        let coords = layout.desired_coords(coalition);
        seen[layout.desired()] = coords.len();
        if coords.len() != per_message {
            self.fail(format!(
                "{who}: desired codeword exposed at {} coordinates, expected {per_message}",
                coords.len()
            ));
        } else if self.rank(0, &codes.desired, &coords)? != coords.len() {
            self.fail(format!("{who}: desired generator rows are dependent"));
        }
        for (k, &count) in seen.iter().enumerate() {
            if count != per_message {
                self.fail(format!("{who}: message {} contributes {count} variables, expected {per_message}", k + 1));
            }
        }
        self.checked += 1;
        Ok(())
    }

    fn plan(&mut self, plan: &QueryPlan, coalition: &[usize]) -> Result<()> {
        let layout = plan.layout();
        let p = &layout.params;
        let per_message = p.colluders() * p.responders().pow(p.messages() as u32 - 1);
        for k in 0..p.messages() {
            let mut parts = Vec::new();
            for &db in coalition {
                let segment = plan.query(db).segment(k);
                let rows: Vec<usize> = layout
                    .blocks
                    .iter()
                    .filter(|b| b.subset.contains(k))
                    .flat_map(|b| b.row_offset..b.row_offset + b.per_db)
                    .collect();
                parts.push(segment.select_rows(&rows)?);
            }
            let stacked = tpir_core::Matrix::vstack(&parts.iter().collect::<Vec<_>>())?;
            let rank = stacked.rank();
            if stacked.rows() != per_message || rank != per_message {
                self.fail(format!(
                    "coalition {}: message {} coefficient rows {} with rank {rank}, expected {per_message}",
                    names(coalition),
                    k + 1,
                    stacked.rows()
                ));
            }
        }
        Ok(())
    }

    fn finish(self, scope: String) -> CheckResult {
        if self.failure_count == 0 {
            CheckResult::pass(CHECK_NAME, format!("{scope}: {} coalition views consistent", self.checked))
        } else {
            CheckResult::fail(
                CHECK_NAME,
                format!("{scope}: {} failures; {}", self.failure_count, self.failures.join("; ")),
            )
        }
    }
}

fn names(dbs: &[usize]) -> String {
    let v: Vec<String> = dbs.iter().map(|d| (d + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn coalitions(params: &SchemeParams) -> Vec<Vec<usize>> {
    let mut rng = SeededRng::new(params.seed()).fork(0x5354);
    subsets_capped(params.databases(), params.colluders(), COALITION_CAP, &mut rng)
}

/// Checks one plan: code structure for every coalition, plus coefficient
/// ranks when the message is short enough.
pub fn structural_privacy_check(
    params: &SchemeParams,
    desired: usize,
    secrets: &SchemeSecrets,
    plan: &QueryPlan,
) -> Result<CheckResult> {
    let layout = build_layout(params, desired)?;
    let codes = CodeBook::new(&layout, plan.fault())?;
    let mut checker = Checker::default();
    if params.message_len() <= PLAN_RANK_MAX_LEN {
        for (k, s) in secrets.matrices.iter().enumerate() {
            if s.rank() != params.message_len() {
                checker.fail(format!("secret for message {} is singular", k + 1));
            }
        }
    }
    for coalition in coalitions(params) {
        checker.layout(&layout, &codes, &coalition)?;
        if params.message_len() <= PLAN_RANK_MAX_LEN {
            checker.plan(plan, &coalition)?;
        }
    }
    Ok(checker.finish(format!("{params} desired {}", desired + 1)))
}

/// Code-structure check for every desired index, without sampling secrets.
pub fn structural_layout_check(params: &SchemeParams, fault: Fault) -> Result<CheckResult> {
    let mut checker = Checker::default();
    let coalitions = coalitions(params);
    for desired in 0..params.messages() {
        let layout = build_layout(params, desired)?;
        let codes = CodeBook::new(&layout, fault)?;
        for coalition in &coalitions {
            checker.layout(&layout, &codes, coalition)?;
        }
    }
    Ok(checker.finish(params.to_string()))
}
