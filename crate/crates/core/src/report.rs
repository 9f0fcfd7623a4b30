//! Machine-readable run reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Passed a randomized test; carries what is needed to rerun it.
    Probabilistic {
        seed: u64,
        trials: usize,
    },
    /// A resource limit stopped the check before a verdict.
    Unverified {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(flatten)]
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Overall verdict, ordered from best to worst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Unverified,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input: serde_json::Value,
    pub seed: u64,
    pub field: String,
    pub checks: Vec<CheckResult>,
    pub timings_ms: BTreeMap<String, u128>,
    pub artifacts: Vec<String>,
    pub output: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str, input: serde_json::Value, seed: u64, field: &str) -> Self {
        RunReport {
            command: command.to_string(),
            input,
            seed,
            field: field.to_string(),
            checks: Vec::new(),
            timings_ms: BTreeMap::new(),
            artifacts: Vec::new(),
            output: serde_json::Value::Null,
        }
    }

    pub fn check(&mut self, name: &str, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass_fail(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        let status = if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.check(name, status, detail);
    }

    /// Run `f`, recording its wall time under `name`.
    pub fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms
            .insert(name.to_string(), start.elapsed().as_millis());
        out
    }

    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .map(|c| match c.status {
                CheckStatus::Pass | CheckStatus::Probabilistic { .. } => Verdict::Pass,
                CheckStatus::Unverified { .. } => Verdict::Unverified,
                CheckStatus::Fail => Verdict::Fail,
            })
            .max()
            .unwrap_or(Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
