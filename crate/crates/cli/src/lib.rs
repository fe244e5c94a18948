//! Run specs, dispatch and reports for the `wblow` command.

pub mod args;
mod commands;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use wblow_core::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// The published JSON schema for [`Report`] and [`BatchReport`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Charts,
    Fan,
    Ideal,
    Wt,
    Pushforward,
    Transform,
    LiftCheck,
    Chain,
    Invariants,
    Example33,
    Truncation,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Charts => "charts",
            CommandName::Fan => "fan",
            CommandName::Ideal => "ideal",
            CommandName::Wt => "wt",
            CommandName::Pushforward => "pushforward",
            CommandName::Transform => "transform",
            CommandName::LiftCheck => "lift-check",
            CommandName::Chain => "chain",
            CommandName::Invariants => "invariants",
            CommandName::Example33 => "example33",
            CommandName::Truncation => "truncation",
        }
    }

    pub fn needs_target(self) -> bool {
        !matches!(self, CommandName::LiftCheck | CommandName::Example33)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// One command invocation, as read from a batch file or built from flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub command: CommandName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    DomainError,
    VerificationFailure,
    InternalError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::DomainError => "domain-error",
            Status::VerificationFailure => "verification-failure",
            Status::InternalError => "internal-error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::DomainError => 1,
            Status::VerificationFailure => 2,
            Status::InternalError => 3,
        }
    }

    fn of_error(e: &Error) -> Status {
        if e.is_internal() {
            Status::InternalError
        } else {
            Status::DomainError
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Stated as a known fact and not checked here.
    Recorded,
    /// Produced by this run.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub fact: String,
    pub source: Source,
}

impl Provenance {
    pub(crate) fn computed(fact: impl Into<String>) -> Self {
        Provenance {
            fact: fact.into(),
            source: Source::Computed,
        }
    }

    pub(crate) fn recorded(fact: impl Into<String>) -> Self {
        Provenance {
            fact: fact.into(),
            source: Source::Recorded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Input {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub parameters: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: CommandName,
    pub input: Input,
    pub status: Status,
    pub exit_code: i32,
    pub result: Option<Value>,
    pub error: Option<ErrorInfo>,
    pub provenance: Vec<Provenance>,
    /// Human-readable rendering; not part of the JSON output.
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => match &self.error {
                Some(e) => format!("error [{}]: {}", e.kind, e.message),
                None => self.text.clone(),
            },
        }
    }
}

/// What a command handler hands back on success.
pub(crate) struct Outcome {
    pub result: Value,
    pub text: String,
    pub verified: bool,
    pub provenance: Vec<Provenance>,
}

pub fn run(spec: &RunSpec) -> Report {
    let input = Input {
        target: spec.target.clone(),
        parameters: spec.parameters.clone(),
    };
    let outcome = commands::dispatch(spec);
    let (status, result, error, text, provenance) = match outcome {
        Ok(o) => {
            let status = if o.verified {
                Status::Ok
            } else {
                Status::VerificationFailure
            };
            (status, Some(o.result), None, o.text, o.provenance)
        }
        Err(e) => (Status::of_error(&e), None, Some(ErrorInfo::from(&e)), String::new(), Vec::new()),
    };
    Report {
        schema_version: SCHEMA_VERSION,
        command: spec.command,
        input,
        status,
        exit_code: status.exit_code(),
        result,
        error,
        provenance,
        text,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub exit_code: i32,
    pub error: Option<ErrorInfo>,
    pub results: Vec<Report>,
}

impl BatchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => {
                if let Some(e) = &self.error {
                    return format!("error [{}]: {}", e.kind, e.message);
                }
                let mut out = format!("batch: {} spec(s), exit code {}\n", self.results.len(), self.exit_code);
                for (i, r) in self.results.iter().enumerate() {
                    out.push_str(&format!("\n[{}] {} ({})\n", i + 1, r.command.as_str(), r.status.as_str()));
                    out.push_str(&r.render(Format::Text));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn batch_error(kind: &str, message: String) -> BatchReport {
    BatchReport {
        schema_version: SCHEMA_VERSION,
        command: "batch",
        exit_code: 1,
        error: Some(ErrorInfo {
            kind: kind.to_string(),
            message,
        }),
        results: Vec::new(),
    }
}

/// Runs every spec concurrently; results keep the input order and the exit
/// code is the largest individual one.
pub fn run_specs(specs: &[RunSpec]) -> BatchReport {
    let results: Vec<Report> = specs.par_iter().map(run).collect();
    BatchReport {
        schema_version: SCHEMA_VERSION,
        command: "batch",
        exit_code: results.iter().map(|r| r.exit_code).max().unwrap_or(0),
        error: None,
        results,
    }
}

pub fn parse_batch(text: &str) -> Result<Vec<RunSpec>, String> {
    serde_json::from_str(text).map_err(|e| format!("batch file is not a list of run specs: {e}"))
}

pub fn run_batch(path: &Path) -> BatchReport {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return batch_error("io", format!("cannot read {}: {e}", path.display())),
    };
    match parse_batch(&text) {
        Ok(specs) => run_specs(&specs),
        Err(message) => batch_error("parse", message),
    }
}

/// Reads the enumeration cap from `WBLOW_MAX_ENUM`-style text.
pub fn parse_max_enum(value: &str) -> Result<u64, String> {
    match value.trim().parse::<u64>() {
        Ok(0) => Err("WBLOW_MAX_ENUM must be a positive integer, got 0".to_string()),
        Ok(v) => Ok(v),
        Err(_) => Err(format!("WBLOW_MAX_ENUM must be a positive integer, got {value:?}")),
    }
}
