//! Check records and their text and JSON-lines renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed where the input anticipates failure.
    ExpectedFail,
    /// Failed where no verified certificate predicts the law.
    ExploratoryFail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedFail => "expected-fail",
            Status::ExploratoryFail => "exploratory-fail",
        }
    }

    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Highest level the verdict covers, for checks on chains.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl Record {
    pub fn new(check: impl Into<String>, instance: impl Into<String>, status: Status) -> Self {
        Record {
            check: check.into(),
            instance: instance.into(),
            status,
            counterexample: None,
            depth: None,
            data: Value::Null,
            wall_ms: None,
        }
    }

    pub fn counterexample(mut self, c: Option<String>) -> Self {
        self.counterexample = c;
        self
    }

    pub fn depth(mut self, d: usize) -> Self {
        self.depth = Some(d);
        self
    }

    pub fn data(mut self, v: Value) -> Self {
        self.data = v;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Jsonl => self.jsonl(),
            Format::Text => self.text(),
        }
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(out, "{:<16} {} {}", r.status.name(), r.check, r.instance);
            if let Some(d) = r.depth {
                let _ = write!(out, " (depth {d})");
            }
            if let Some(ms) = r.wall_ms {
                let _ = write!(out, " [{ms:.1} ms]");
            }
            out.push('\n');
            if let Some(c) = &r.counterexample {
                let _ = writeln!(out, "    counterexample: {c}");
            }
            if let Value::Object(map) = &r.data {
                for (k, v) in map {
                    let _ = writeln!(out, "    {k}: {}", text_value(v));
                }
            }
        }
        let fails = self.records.iter().filter(|r| r.status == Status::Fail).count();
        let _ = writeln!(out, "{} records, {} unexpected failures", self.records.len(), fails);
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            items.iter().map(text_value).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}
