use std::path::Path;

use liedegen_core::catalog::to_canonical_json;
use liedegen_core::{Error, ErrorKind};
use serde_json::{json, Value};

pub const PASS: u8 = 0;
pub const CHECK_FAILED: u8 = 1;
pub const INPUT: u8 = 2;
pub const UNSUPPORTED: u8 = 3;

pub fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Check => CHECK_FAILED,
        ErrorKind::Input => INPUT,
        ErrorKind::Unsupported => UNSUPPORTED,
    }
}

pub struct Report {
    pub lines: Vec<String>,
    pub errors: Vec<String>,
    pub json: Value,
    pub status: u8,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { lines: Vec::new(), errors: Vec::new(), json: json!({ "command": command }), status: PASS }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.json[key] = value;
    }

    pub fn fail(&mut self) {
        self.status = self.status.max(CHECK_FAILED);
    }

    pub fn from_error(command: &str, e: &Error) -> Self {
        let mut r = Report::new(command);
        r.status = exit_code(e.kind());
        let kind = match e.kind() {
            ErrorKind::Check => "check",
            ErrorKind::Input => "input",
            ErrorKind::Unsupported => "unsupported",
        };
        r.errors.push(format!("error: {e}"));
        r.set("error", json!({ "kind": kind, "message": e.to_string() }));
        r
    }

    pub fn print(&self) {
        for l in &self.lines {
            println!("{l}");
        }
        for e in &self.errors {
            eprintln!("{e}");
        }
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let mut v = self.json.clone();
        v["status"] = json!(self.status);
        std::fs::write(path, to_canonical_json(&v))
    }
}
