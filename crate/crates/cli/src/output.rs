use std::collections::BTreeMap;

use bcinv_core::{Error, ErrorClass};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct CliError {
    kind: String,
    class: ErrorClass,
    message: String,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            class: ErrorClass::Input,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Input => 1,
            ErrorClass::Scope => 2,
            ErrorClass::Internal => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        let class = match self.class {
            ErrorClass::Input => "input",
            ErrorClass::Scope => "scope",
            ErrorClass::Internal => "internal",
        };
        json!({ "kind": self.kind, "class": class, "message": self.message })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} error ({}): {}",
            match self.class {
                ErrorClass::Input => "input",
                ErrorClass::Scope => "scope",
                ErrorClass::Internal => "internal",
            },
            self.kind,
            self.message
        )
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            kind: e.kind().to_string(),
            class: e.class(),
            message: e.to_string(),
        }
    }
}

/// Reproducibility record embedded in every JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    /// Arguments after the program name, without `--jobs`.
    pub command: Vec<String>,
    pub seed: u64,
    pub bounds: BTreeMap<&'static str, u64>,
    pub precision: usize,
    pub timing_ms: u64,
}

impl RunManifest {
    pub fn new(args: &[String], seed: u64, precision: usize) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: strip_jobs(args),
            seed,
            bounds: BTreeMap::new(),
            precision,
            timing_ms: 0,
        }
    }
}

fn strip_jobs(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--jobs" || a == "-j" {
            it.next();
        } else if !a.starts_with("--jobs=") {
            out.push(a.clone());
        }
    }
    out
}

/// Result of a subcommand: a JSON document and its human-readable rendering.
pub struct Outcome {
    pub json: Value,
    pub human: String,
}

pub fn render_json(body: Value, manifest: &RunManifest) -> String {
    let mut obj = match body {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert(
        "manifest".into(),
        serde_json::to_value(manifest).expect("manifest serializes"),
    );
    serde_json::to_string_pretty(&Value::Object(obj)).expect("json serializes")
}
