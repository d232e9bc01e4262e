use std::collections::BTreeMap;
use std::fmt::Write as _;

use bourbaki_core::check::all_pass;
use bourbaki_core::Check;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproducibility {
    pub seeds: Vec<u64>,
    pub rules: Vec<String>,
    pub version: String,
}

/// The record every command emits. Everything needed to replay it lives in
/// `inputs`; `verify` reruns from there and compares the JSON text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub inputs: Value,
    /// Present exactly when every check passed.
    pub witness: Option<Value>,
    pub checks: Vec<Check>,
    pub modes: BTreeMap<String, String>,
    pub reproducibility: Reproducibility,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Prose lines describing the witness; not part of the machine format.
    #[serde(skip)]
    pub summary: Vec<String>,
}

impl Certificate {
    pub fn new(kind: &str, inputs: Value, reproducibility: Reproducibility) -> Self {
        Certificate {
            kind: kind.to_string(),
            inputs,
            witness: None,
            checks: Vec::new(),
            modes: BTreeMap::new(),
            reproducibility,
            failure: None,
            summary: Vec::new(),
        }
    }

    pub fn mode(mut self, key: &str, value: impl Serialize) -> Self {
        let text = match serde_json::to_value(value) {
            Ok(Value::String(s)) => s,
            Ok(other) => other.to_string(),
            Err(_) => String::new(),
        };
        self.modes.insert(key.to_string(), text);
        self
    }

    pub fn line(mut self, text: impl Into<String>) -> Self {
        self.summary.push(text.into());
        self
    }

    /// Sets checks and witness together so that the witness is dropped
    /// whenever a check fails.
    pub fn finish(mut self, checks: Vec<Check>, witness: Value) -> Self {
        assert!(!checks.is_empty(), "a certificate needs at least one check");
        self.witness = if all_pass(&checks) {
            Some(witness)
        } else {
            None
        };
        self.checks = checks;
        self
    }

    /// A certificate for an instance that misses a theorem hypothesis.
    pub fn unmet(mut self, message: String) -> Self {
        self.checks = vec![Check::new("hypotheses hold", false)];
        self.witness = None;
        self.summary.clear();
        self.failure = Some(message);
        self
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && all_pass(&self.checks)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn to_prose(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} certificate", self.kind);
        for line in &self.summary {
            let _ = writeln!(out, "  {line}");
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "  failure: {f}");
        }
        if !self.modes.is_empty() {
            let modes: Vec<String> = self.modes.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "  modes: {}", modes.join(", "));
        }
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let _ = writeln!(out, "  {c}");
        }
        let r = &self.reproducibility;
        let _ = writeln!(
            out,
            "reproducibility: seeds {:?}, rules [{}], version {}",
            r.seeds,
            r.rules.join(", "),
            r.version
        );
        let _ = write!(
            out,
            "result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}
