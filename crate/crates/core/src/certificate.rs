//! Structured verification reports.
//!
//! A [`Certificate`] is a list of named checks, each with a verdict and a JSON
//! witness. Serialization is deterministic: parameters live in a `BTreeMap`
//! and durations are only emitted when explicitly recorded.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Longest list a witness carries before it is cut and flagged `truncated`.
pub const WITNESS_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, witness: Value) -> Self {
        Check {
            name: name.into(),
            verdict,
            witness,
            duration_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub toolkit: String,
    pub subject: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn new(subject: impl Into<String>) -> Self {
        Certificate {
            schema: SCHEMA_VERSION,
            toolkit: format!("stacktight {}", env!("CARGO_PKG_VERSION")),
            subject: subject.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Serialize) -> Self {
        self.set_param(key, value);
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.to_owned(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Worst verdict over all checks; an empty certificate passes vacuously.
    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .map(|c| c.verdict)
            .max()
            .unwrap_or(Verdict::Pass)
    }

    /// 0 when everything passes, 1 on any failure, 2 when only inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// A list witness, cut to [`WITNESS_CAP`] entries.
pub fn capped_list<T: Serialize>(items: &[T]) -> Value {
    let truncated = items.len() > WITNESS_CAP;
    let shown = &items[..items.len().min(WITNESS_CAP)];
    json!({
        "items": shown,
        "total": items.len(),
        "truncated": truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_aggregation_and_exit_codes() {
        let mut c = Certificate::new("x");
        assert_eq!(c.exit_code(), 0);
        c.push(Check::new("a", Verdict::Pass, Value::Null));
        c.push(Check::new("b", Verdict::Inconclusive, Value::Null));
        assert_eq!(c.exit_code(), 2);
        c.push(Check::new("c", Verdict::Fail, Value::Null));
        assert_eq!(c.exit_code(), 1);
        assert_eq!(c.verdict(), Verdict::Fail);
    }

    #[test]
    fn serialization_is_stable() {
        let build = || {
            Certificate::new("m3")
                .with_param("n", 29)
                .with_param("d", 3)
        };
        assert_eq!(build().to_json(), build().to_json());
        let text = build().to_json();
        assert!(text.find("\"d\"").unwrap() < text.find("\"n\"").unwrap());
        assert!(text.contains("\"schema\": 1"));
    }

    #[test]
    fn witness_lists_are_capped() {
        let long: Vec<u32> = (0..100).collect();
        let w = capped_list(&long);
        assert_eq!(w["truncated"], true);
        assert_eq!(w["items"].as_array().unwrap().len(), WITNESS_CAP);
        assert_eq!(w["total"], 100);
        assert_eq!(capped_list(&[1, 2])["truncated"], false);
    }
}
