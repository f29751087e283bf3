//! Machine-readable results. Certificates carry no timing so that a fixed
//! input, seed and version always serialize to the same bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::input::PairSpec;
use crate::report::{Check, Report, Status};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Options {
    pub seed: u64,
    pub field: String,
    pub mult: usize,
    pub enumerate: usize,
    pub samples: usize,
    pub max_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: InputInfo,
    pub options: Options,
    pub status: Status,
    pub exhaustive: bool,
    pub checks: Vec<Check>,
    pub result: Value,
}

impl Certificate {
    pub fn new(command: &str, input: InputInfo, options: Options, report: Report, result: Value) -> Certificate {
        let status = if report.any_failed() { Status::Fail } else { Status::Pass };
        Certificate {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input,
            options,
            status,
            exhaustive: report.exhaustive(),
            checks: report.checks,
            result,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}  {}  {}", self.tool, self.version, self.command, self.input.path);
        let _ = writeln!(s, "digest  {}", self.input.digest);
        let _ = writeln!(
            s,
            "options seed={} field={} mult={} enum={} samples={} dim={}",
            self.options.seed, self.options.field, self.options.mult, self.options.enumerate, self.options.samples, self.options.max_dim
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIPPED",
            };
            let ex = if c.exhaustive { "" } else { "  (within caps)" };
            let line = format!("{st:<8}{:<width$}{ex}", c.name);
            let _ = writeln!(s, "{}", line.trim_end());
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "        witness: {w}");
            }
        }
        let st = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "status  {st}{}", if self.exhaustive { "" } else { " (some checks within caps)" });
        s
    }
}
