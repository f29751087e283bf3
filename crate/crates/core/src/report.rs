//! Check results shared by every verifier. The CLI serializes these into
//! certificates.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Pass, exhaustive: true, detail: Value::Null, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Check {
        Check { name: name.into(), status: Status::Fail, exhaustive: true, detail: Value::Null, witness: Some(witness) }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
            exhaustive: true,
            detail: Value::String(reason.to_string()),
            witness: None,
        }
    }

    /// PASS when `witness` is `None`, FAIL carrying it otherwise.
    pub fn from_witness(name: impl Into<String>, witness: Option<Value>) -> Check {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Check {
        self.detail = detail;
        self
    }

    pub fn with_exhaustive(mut self, exhaustive: bool) -> Check {
        self.exhaustive = exhaustive;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        !self.checks.iter().any(|c| c.failed())
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.failed())
    }

    pub fn exhaustive(&self) -> bool {
        self.checks.iter().all(|c| c.exhaustive)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
