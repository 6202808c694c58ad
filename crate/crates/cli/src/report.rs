use std::fmt::Write as _;

use combinach::{Error, Result};
use serde_json::{json, Value};

use crate::OutputMode;

/// A command result before formatting.
pub struct Report {
    value: Value,
    csv: Option<String>,
    lines: Option<Vec<String>>,
    pub failed: bool,
}

impl Report {
    pub fn scalar(value: Value) -> Self {
        Report { value, csv: None, lines: None, failed: false }
    }

    pub fn record(value: Value) -> Self {
        Report::scalar(value)
    }

    pub fn table(value: Value, csv: String) -> Self {
        Report { value, csv: Some(csv), lines: None, failed: false }
    }

    pub fn lines(value: Value, lines: Vec<String>, failed: bool) -> Self {
        Report { value, csv: None, lines: Some(lines), failed }
    }

    pub fn render(&self, command: String, mode: OutputMode) -> Result<String> {
        match mode {
            OutputMode::Text => Ok(match &self.lines {
                Some(lines) => lines.iter().map(|l| format!("{l}\n")).collect(),
                None => text(&self.value),
            }),
            OutputMode::Records => {
                let rec = json!({ "command": command, "result": self.value });
                Ok(format!("{rec}\n"))
            }
            OutputMode::Csv => self
                .csv
                .clone()
                .ok_or_else(|| Error::InvalidArgument(format!("csv output is not available for {command}"))),
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// `path: value` lines; lists of scalars stay on one line.
fn text(v: &Value) -> String {
    let mut out = String::new();
    if is_scalar(v) {
        out.push_str(&scalar(v));
        out.push('\n');
    } else {
        walk("", v, &mut out);
    }
    out
}

fn walk(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let body: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{path}: [{}]", body.join(", "));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(&format!("{path}[{i}]"), x, out);
            }
        }
        x => {
            let _ = writeln!(out, "{path}: {}", scalar(x));
        }
    }
}
