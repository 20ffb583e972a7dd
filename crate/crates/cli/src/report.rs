//! Machine-readable command reports.
//!
//! Every subcommand emits one JSON report on stdout with the keys `command`,
//! `parameters`, `results`, `status` (and `timing_ms` when requested). Maps
//! are serialized with sorted keys and rationals as `p/q` strings, so
//! identical inputs produce byte-identical output. Elapsed time is written
//! to stderr by default precisely to keep stdout deterministic; `--timing`
//! embeds it in the JSON instead.

use std::collections::BTreeMap;

use serde_json::{json, Value};

/// Overall command outcome, mapped onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Counterexample,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Counterexample => 1,
            Status::Error => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Counterexample => "counterexample",
            Status::Error => "error",
        }
    }
}

pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: Value,
    pub status: Status,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            results: Value::Null,
            status: Status::Ok,
            timing_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Report {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("command".into(), json!(self.command));
        map.insert("parameters".into(), json!(self.parameters));
        map.insert("results".into(), self.results.clone());
        map.insert("status".into(), json!(self.status.as_str()));
        if let Some(ms) = self.timing_ms {
            map.insert("timing_ms".into(), json!(ms as u64));
        }
        Value::Object(map)
    }

    /// Print the report to stdout and return the exit code.
    pub fn emit(&self) -> i32 {
        println!("{}", serde_json::to_string_pretty(&self.to_json()).expect("serializable"));
        self.status.exit_code()
    }
}
