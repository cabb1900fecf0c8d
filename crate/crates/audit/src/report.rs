use std::fmt::Write;

use serde::Serialize;
use tpir_core::{Error, Result, SchemeParams};

/// Version of the line-delimited record format.
pub const RECORD_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Statistic {
    pub label: String,
    pub chi_square: f64,
    pub df: usize,
    pub p_value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub statistics: Vec<Statistic>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, details: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            details: details.into(),
            statistics: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, details: impl Into<String>) -> Self {
        Self {
            passed: false,
            ..Self::pass(name, details)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateRow {
    pub messages: usize,
    pub responders: usize,
    pub colluders: usize,
    pub databases: usize,
    pub achieved: String,
    pub capacity: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AuditReport {
    pub params: Option<SchemeParams>,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub rates: Vec<RateRow>,
}

impl AuditReport {
    pub fn new(params: Option<SchemeParams>, seed: u64) -> Self {
        Self {
            params,
            seed,
            ..Self::default()
        }
    }

    /// Adds a check; each name may appear once.
    pub fn add(&mut self, check: CheckResult) -> Result<()> {
        if self.checks.iter().any(|c| c.name == check.name) {
            return Err(Error::InvalidParams(format!("check {} already recorded", check.name)));
        }
        self.checks.push(check);
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.rates.iter().all(|r| r.equal)
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        if let Some(p) = &self.params {
            let _ = writeln!(s, "{p}  seed={}", self.seed);
        }
        if !self.rates.is_empty() {
            let _ = writeln!(s, "{:>3} {:>3} {:>3} {:>3}  {:>12} {:>12}  ok", "K", "N", "T", "M", "achieved", "capacity");
            for r in &self.rates {
                let _ = writeln!(
                    s,
                    "{:>3} {:>3} {:>3} {:>3}  {:>12} {:>12}  {}",
                    r.messages,
                    r.responders,
                    r.colluders,
                    r.databases,
                    r.achieved,
                    r.capacity,
                    if r.equal { "yes" } else { "NO" }
                );
            }
        }
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.details);
            for st in &c.statistics {
                let _ = writeln!(
                    s,
                    "       {}: chi2={:.3} df={} p={:.4e} threshold={:.4e}",
                    st.label, st.chi_square, st.df, st.p_value, st.threshold
                );
            }
        }
        let _ = writeln!(s, "{}", if self.passed() { "all checks passed" } else { "FAILED" });
        s
    }

    /// One JSON object per line: a header, every rate row, every check, a summary.
    pub fn to_records(&self) -> Vec<String> {
        let mut out = vec![serde_json::json!({
            "schema": RECORD_SCHEMA,
            "kind": "audit",
            "params": self.params,
            "seed": self.seed,
        })
        .to_string()];
        for r in &self.rates {
            out.push(serde_json::json!({"schema": RECORD_SCHEMA, "kind": "rate", "row": r}).to_string());
        }
        for c in &self.checks {
            out.push(serde_json::json!({"schema": RECORD_SCHEMA, "kind": "check", "check": c}).to_string());
        }
        out.push(serde_json::json!({"schema": RECORD_SCHEMA, "kind": "summary", "passed": self.passed()}).to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut r = AuditReport::new(None, 1);
        r.add(CheckResult::pass("a", "")).unwrap();
        assert!(r.add(CheckResult::fail("a", "")).is_err());
        assert!(r.passed());
        r.add(CheckResult::fail("b", "bad")).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn records_parse() {
        let mut r = AuditReport::new(Some(SchemeParams::new(2, 3, 2, 3).unwrap()), 4);
        r.add(CheckResult::pass("x", "fine")).unwrap();
        let lines = r.to_records();
        assert_eq!(lines.len(), 3);
        for line in &lines {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["schema"], 1);
        }
        let head: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
        assert_eq!(head["params"]["messages"], 2);
        assert_eq!(head["params"]["modulus"], 11);
    }
}
