use std::fmt::Write as _;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use treequiver::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    InvalidInput,
    Internal,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InvalidInput => "invalid_input",
            Status::Internal => "internal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub status: Status,
    pub kind: String,
    pub message: String,
    /// Partial result to keep in the report.
    pub result: Option<Value>,
}

impl Failure {
    pub fn invalid(kind: &str, message: impl Into<String>) -> Self {
        Self {
            status: Status::InvalidInput,
            kind: kind.into(),
            message: message.into(),
            result: None,
        }
    }

    pub fn internal(kind: &str, message: impl Into<String>) -> Self {
        Self {
            status: Status::Internal,
            kind: kind.into(),
            message: message.into(),
            result: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::internal(e.kind(), e.to_string())
        } else {
            Failure::invalid(e.kind(), e.to_string())
        }
    }
}

#[derive(Clone, Debug)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub args: Vec<String>,
    pub inputs: Vec<Value>,
    pub elapsed_ms: f64,
    pub status: Status,
    pub result: Value,
    pub error: Option<ErrorInfo>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, args: Vec<String>) -> Self {
        Self {
            command,
            args,
            inputs: Vec::new(),
            elapsed_ms: 0.0,
            status: Status::Ok,
            result: Value::Null,
            error: None,
            warnings: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push(json!({
            "path": path,
            "bytes": bytes.len(),
            "sha256": hex::encode(Sha256::digest(bytes)),
        }));
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn finish_ok(&mut self, result: Value) {
        self.status = Status::Ok;
        self.result = result;
    }

    pub fn finish_err(&mut self, failure: Failure) {
        self.status = failure.status;
        self.result = failure.result.unwrap_or(Value::Null);
        self.error = Some(ErrorInfo {
            kind: failure.kind,
            message: failure.message,
        });
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": { "name": self.command, "args": self.args },
            "inputs": self.inputs,
            "elapsed_ms": (self.elapsed_ms * 1000.0).round() / 1000.0,
            "status": self.status.as_str(),
            "result": self.result,
            "error": self.error.as_ref().map(|e| json!({ "kind": e.kind, "message": e.message })),
            "warnings": self.warnings,
        })
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    pub fn render_pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command   {}", self.command);
        let _ = writeln!(out, "status    {}", self.status.as_str());
        for input in &self.inputs {
            let _ = writeln!(
                out,
                "input     {} sha256:{}",
                input["path"].as_str().unwrap_or(""),
                input["sha256"].as_str().unwrap_or("")
            );
        }
        let _ = writeln!(out, "elapsed   {:.3} ms", self.elapsed_ms);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error     {}: {}", e.kind, e.message);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning   {w}");
        }
        render_value(&mut out, &self.result);
        out
    }
}

fn summand_table(out: &mut String, summands: &[Value]) {
    let rows: Vec<(String, String, String)> = summands
        .iter()
        .map(|s| {
            (
                s["apex"].as_str().unwrap_or("").to_string(),
                s["multiplicity"].to_string(),
                s["key"].as_str().unwrap_or("").to_string(),
            )
        })
        .collect();
    let w_apex = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(4);
    let w_mult = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(4);
    let _ = writeln!(out, "  {:<w_apex$}  {:>w_mult$}  key", "apex", "mult");
    for (apex, mult, key) in rows {
        let _ = writeln!(out, "  {apex:<w_apex$}  {mult:>w_mult$}  {key}");
    }
}

fn render_value(out: &mut String, value: &Value) {
    let Some(obj) = value.as_object() else {
        if !value.is_null() {
            let _ = writeln!(out, "{value}");
        }
        return;
    };
    for (k, v) in obj {
        match v {
            Value::Array(items)
                if items.iter().all(|s| s.get("key").is_some() && s.get("apex").is_some()) && !items.is_empty() =>
            {
                let _ = writeln!(out, "{k}:");
                summand_table(out, items);
            }
            Value::Object(_) if v.get("summands").is_some() => {
                let _ = writeln!(out, "{k}:");
                render_value(out, v);
            }
            Value::Array(items) if items.iter().any(Value::is_object) => {
                let _ = writeln!(out, "{k}: {} entries", items.len());
                for (i, item) in items.iter().enumerate() {
                    let _ = writeln!(out, "[{i}]");
                    render_value(out, item);
                }
            }
            _ => {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
    }
}
