//! Reports in two renderings: aligned text for people and one JSON document
//! for programs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub geometry: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Value,
    pub status: Status,
    #[serde(skip)]
    pub lines: Vec<String>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: &str, geometry: &str) -> Self {
        Report {
            command: command.to_string(),
            geometry: geometry.to_string(),
            inputs: BTreeMap::new(),
            outputs: Value::Object(Default::default()),
            status: Status::Ok,
            lines: Vec::new(),
            elapsed: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<String>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        if let Value::Object(m) = &mut self.outputs {
            m.insert(key.to_string(), value.into());
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// A `key: value` text line together with the matching output entry.
    pub fn field(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        self.lines.push(format!("{key}: {v}"));
        self.set(key, v);
    }

    pub fn fail(&mut self) {
        self.status = Status::Failed;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                let args: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let header = format!("{} [{}] {}", self.command, self.geometry, args.join(" "));
                let _ = writeln!(s, "{}", header.trim_end());
                for l in &self.lines {
                    let _ = writeln!(s, "  {l}");
                }
                if let Some(t) = self.elapsed {
                    let _ = writeln!(s, "  time: {:.3} ms", t.as_secs_f64() * 1e3);
                }
                s
            }
        }
    }
}

pub fn render_error(command: &str, err: &CliError, format: Format) -> String {
    match format {
        Format::Machine => {
            let doc = serde_json::json!({
                "command": command,
                "status": "error",
                "error": {"code": err.code(), "class": err.class(), "message": err.to_string()},
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("errors serialize");
            s.push('\n');
            s
        }
        Format::Text => format!("error[{}]: {err}\n", err.code()),
    }
}
