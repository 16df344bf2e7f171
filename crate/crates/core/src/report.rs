//! Check records and report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How many samples must pass for a check to pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    All,
    /// `passed * den >= attempted * num`
    AtLeast { num: u64, den: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub what: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub germ: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl Failure {
    pub fn new(what: impl Into<String>) -> Self {
        Failure {
            what: what.into(),
            generator: None,
            germ: None,
            seed: None,
        }
    }

    pub fn with_generator(mut self, g: impl Into<String>) -> Self {
        self.generator = Some(g.into());
        self
    }

    pub fn with_germ(mut self, germ: &crate::jet::JetGerm) -> Self {
        self.germ = serde_json::from_str(&germ.to_json()).ok();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Failure payloads kept per check; the count is always exact.
pub const MAX_STORED_FAILURES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub claim: String,
    pub rule: Rule,
    pub attempted: u64,
    pub passed: u64,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    pub details: BTreeMap<String, Value>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, claim: impl Into<String>, rule: Rule) -> Self {
        CheckReport {
            id: id.into(),
            claim: claim.into(),
            rule,
            attempted: 0,
            passed: 0,
            seed: None,
            elapsed_ms: None,
            failures: vec![],
            failure_count: 0,
            details: BTreeMap::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn pass(&mut self) {
        self.attempted += 1;
        self.passed += 1;
    }

    pub fn fail(&mut self, f: Failure) {
        self.attempted += 1;
        self.failure_count += 1;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(f);
        }
    }

    pub fn record(&mut self, ok: bool, f: impl FnOnce() -> Failure) {
        if ok {
            self.pass()
        } else {
            self.fail(f())
        }
    }

    pub fn detail(&mut self, key: &str, v: impl Serialize) {
        self.details
            .insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.attempted += other.attempted;
        self.passed += other.passed;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(f);
            }
        }
    }

    pub fn ok(&self) -> bool {
        match self.rule {
            Rule::All => self.attempted > 0 && self.passed == self.attempted,
            Rule::AtLeast { num, den } => {
                self.attempted > 0 && self.passed * den >= self.attempted * num
            }
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: {}/{} passed",
            if self.ok() { "PASS" } else { "FAIL" },
            self.id,
            self.passed,
            self.attempted
        )
    }
}

fn rule_text(r: Rule) -> String {
    match r {
        Rule::All => "all samples".into(),
        Rule::AtLeast { num, den } => format!("at least {num}/{den} of samples"),
    }
}

/// Markdown document; byte-stable for identical input.
pub fn to_markdown(reports: &[CheckReport]) -> String {
    let mut s = String::from("# Verification report\n\n");
    if reports.is_empty() {
        s.push_str("No checks were run.\n");
        return s;
    }
    let mut sorted: Vec<&CheckReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    s.push_str("| check | result | passed | attempted |\n|---|---|---|---|\n");
    for r in &sorted {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} |",
            r.id,
            if r.ok() { "pass" } else { "FAIL" },
            r.passed,
            r.attempted
        );
    }
    for r in sorted {
        let _ = write!(
            s,
            "\n## {}\n\n{}\n\n- rule: {}\n- passed: {}/{}\n",
            r.id,
            r.claim,
            rule_text(r.rule),
            r.passed,
            r.attempted
        );
        if let Some(seed) = r.seed {
            let _ = writeln!(s, "- seed: {seed}");
        }
        if let Some(ms) = r.elapsed_ms {
            let _ = writeln!(s, "- elapsed: {ms} ms");
        }
        for (k, v) in &r.details {
            let _ = writeln!(s, "- {k}: {v}");
        }
        if r.failure_count > 0 {
            let _ = writeln!(s, "- failures: {}", r.failure_count);
            for f in &r.failures {
                let _ = writeln!(s, "\n```json\n{}\n```", serde_json::to_string_pretty(f).unwrap());
            }
        }
    }
    s
}

pub fn to_json(reports: &[CheckReport]) -> String {
    let mut sorted: Vec<&CheckReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let doc = serde_json::json!({
        "all_passed": reports.iter().all(CheckReport::ok),
        "checks": sorted,
    });
    serde_json::to_string_pretty(&doc).unwrap()
}

/// Writes `<stem>.md` and `<stem>.json`.
pub fn emit_report(reports: &[CheckReport], stem: &std::path::Path) -> crate::Result<()> {
    std::fs::write(stem.with_extension("md"), to_markdown(reports))?;
    std::fs::write(stem.with_extension("json"), to_json(reports))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let md = to_markdown(&[]);
        assert!(md.contains("No checks"));
        let v: Value = serde_json::from_str(&to_json(&[])).unwrap();
        assert_eq!(v["checks"], Value::Array(vec![]));
    }

    #[test]
    fn threshold_rules() {
        let mut r = CheckReport::new("x", "claim", Rule::AtLeast { num: 95, den: 100 });
        for _ in 0..19 {
            r.pass();
        }
        r.fail(Failure::new("bad"));
        assert!(r.ok());
        r.fail(Failure::new("bad"));
        assert!(!r.ok());
        let mut a = CheckReport::new("y", "claim", Rule::All);
        assert!(!a.ok());
        a.pass();
        assert!(a.ok());
    }

    #[test]
    fn failure_carries_replay_germ() {
        let mut r = CheckReport::new("z", "claim", Rule::All);
        r.fail(Failure::new("bad").with_germ(&crate::jet::JetGerm::flat(1)).with_seed(3));
        let md = to_markdown(&[r.clone()]);
        assert!(md.contains("base_point"));
        assert_eq!(to_json(&[r.clone()]), to_json(&[r]));
    }
}
