use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// One comparison of a computed value against an oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub left: String,
    pub right: String,
    /// `exact` or `rel-tol <t>`.
    pub mode: String,
    pub passed: bool,
}

/// Aggregate result of one family in the verification battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub mode: String,
    pub checks: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<Family>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            passed: true,
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn output(&mut self, key: &str, value: impl ToString) {
        self.outputs.insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, name: &str, left: impl ToString, right: impl ToString, mode: &str, passed: bool) {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.to_string(),
            left: left.to_string(),
            right: right.to_string(),
            mode: mode.to_string(),
            passed,
        });
    }

    pub fn family(&mut self, family: Family) {
        self.passed &= family.passed;
        self.families.push(family);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "  {k}: {v}");
        }
        for (k, v) in &self.outputs {
            let _ = writeln!(s, "{k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {}: {} vs {} ({})",
                verdict(c.passed),
                c.name,
                c.left,
                c.right,
                c.mode
            );
        }
        for f in &self.families {
            let _ = writeln!(
                s,
                "[{}] {} ({} checks, {} failures, {})",
                verdict(f.passed),
                f.name,
                f.checks,
                f.failures.len(),
                f.mode
            );
            for dump in &f.failures {
                let _ = writeln!(s, "    {dump}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(s, "elapsed: {ms:.1} ms");
        }
        let _ = writeln!(s, "result: {}", verdict(self.passed));
        s
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
