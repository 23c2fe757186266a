//! The structured output document and exit-status bookkeeping.

use polarcrit_core::{Error, FieldSpec};
use serde::Serialize;
use serde_json::Value;

use crate::RouteArg;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailure,
    Fail,
    ParseError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailure => 2,
            Status::Fail => 3,
            Status::ParseError => 4,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Syntax { .. }
            | Error::UnknownVariable(_)
            | Error::Coefficient(_)
            | Error::Field(_)
            | Error::Format(_) => Status::ParseError,
            Error::Fail(_) | Error::Unstable(_) => Status::Fail,
            _ => Status::ValidationFailure,
        }
    }
}

/// One problem file (or one standalone computation).
#[derive(Clone, Debug, Serialize)]
pub struct Run {
    pub file: Option<String>,
    pub field: Option<FieldSpec>,
    pub prime: Option<u64>,
    pub inputs: Value,
    pub status: Status,
    pub error: Option<String>,
    pub warnings: Vec<String>,
    pub seconds: f64,
    pub results: Value,
    #[serde(skip)]
    pub text: String,
}

impl Run {
    pub fn new(file: Option<String>) -> Self {
        Run {
            file,
            field: None,
            prime: None,
            inputs: Value::Null,
            status: Status::Ok,
            error: None,
            warnings: Vec::new(),
            seconds: 0.0,
            results: Value::Null,
            text: String::new(),
        }
    }

    pub fn set_field(&mut self, spec: FieldSpec) {
        self.field = Some(spec);
        self.prime = spec.modulus();
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.status = self.status.max(Status::of_error(e));
        self.error = Some(e.to_string());
    }

    pub fn flag(&mut self, status: Status, warning: impl Into<String>) {
        self.status = self.status.max(status);
        self.warnings.push(warning.into());
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub format: u32,
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub route: Option<RouteArg>,
    pub seconds: f64,
    pub runs: Vec<Run>,
}

impl Document {
    pub fn status(&self) -> Status {
        self.runs.iter().map(|r| r.status).max().unwrap_or(Status::Ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("output document serializes")
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let many = self.runs.len() > 1;
        for run in &self.runs {
            if many {
                if let Some(f) = &run.file {
                    out.push_str(&format!("== {f}\n"));
                }
            }
            out.push_str(&run.text);
            for w in &run.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            if let Some(e) = &run.error {
                out.push_str(&format!("error: {e}\n"));
            }
        }
        out
    }
}
