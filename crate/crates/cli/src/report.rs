//! Result documents with a text and a JSON rendering.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Refused,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Refused => 2,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Refused => "refused",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detail {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: Vec<Detail>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Check {
        Check { name: name.into(), status, details: Vec::new() }
    }

    pub fn detail(mut self, key: impl Into<String>, value: impl ToString) -> Check {
        self.details.push(Detail { key: key.into(), value: value.to_string() });
        self
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.details.push(Detail { key: key.into(), value: value.to_string() });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub status: Status,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    /// Overall status is the worst check status; no checks means pass.
    pub fn new(command: &str, model: &str, warnings: Vec<String>, checks: Vec<Check>) -> Report {
        let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
        Report { command: command.into(), model: model.into(), status, warnings, checks }
    }

    pub fn refused(command: &str, model: &str, reason: impl ToString) -> Report {
        Report::new(command, model, Vec::new(), vec![Check::new("input", Status::Refused).detail("reason", reason)])
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "model: {}", self.model);
        let _ = writeln!(out, "status: {}", self.status.label());
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for check in &self.checks {
            let _ = writeln!(out, "[{}] {}", check.status.label(), check.name);
            for d in &check.details {
                let _ = writeln!(out, "    {} = {}", d.key, d.value);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
