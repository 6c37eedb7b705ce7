//! Verification certificates: named checks with pass/fail and supporting data.

use std::time::Instant;

use serde_json::{json, Value};

use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub name: String,
    pub field: FieldSpec,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
    started: Instant,
}

impl Certificate {
    pub fn new(name: &str, field: FieldSpec) -> Self {
        Certificate {
            name: name.to_string(),
            field,
            checks: Vec::new(),
            elapsed_ms: 0,
            started: Instant::now(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: Value) -> bool {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
        self.elapsed_ms = self.started.elapsed().as_millis();
        passed
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "certificate": self.name,
            "field": self.field,
            "passed": self.passed(),
            "elapsed_ms": self.elapsed_ms as u64,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}
