//! Reports: the (possibly new) document, a command echo, a results block
//! and a status. JSON output is the machine form; `render` is the same data
//! as text.

use b3tower::hamiltonian::ClaimReport;
use b3tower::StructureCertificate;
use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::document::RawDocument;

/// Version of the report layout, bumped on incompatible changes.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: IndexMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub document: Option<RawDocument>,
    pub command: CommandEcho,
    pub results: IndexMap<String, Value>,
    pub passed: bool,
    human: Vec<String>,
}

impl Report {
    pub fn new(name: &str) -> Report {
        Report {
            document: None,
            command: CommandEcho {
                name: name.to_string(),
                args: IndexMap::new(),
            },
            results: IndexMap::new(),
            passed: true,
            human: Vec::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl Serialize) {
        self.command.args.insert(key.to_string(), to_value(value));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.to_string(), to_value(value));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    /// Folds a pass/fail outcome into the status.
    pub fn require(&mut self, ok: bool) {
        self.passed &= ok;
    }

    pub fn expectations(&mut self, list: Vec<Expectation>) {
        if list.is_empty() {
            return;
        }
        for e in &list {
            self.line(format!(
                "  {} expected {}: {} (found {})",
                mark(e.passed),
                e.name,
                e.expected,
                e.found
            ));
            self.require(e.passed);
        }
        self.result("expectations", list);
    }

    pub fn certificate(&mut self, cert: &StructureCertificate) {
        self.line(format!("certificate {}: {}", cert.kind, verdict(cert.overall)));
        for c in &cert.conditions {
            match &c.witness {
                Some(w) if !c.passed => self.line(format!("  {} {}   witness: {w}", mark(c.passed), c.id)),
                _ => self.line(format!("  {} {}", mark(c.passed), c.id)),
            }
        }
        if let Some(f) = &cert.replacement {
            self.line(format!("  θ3 replaced by θ3 + ({f})·θ1"));
        }
        self.result("certificate", cert);
        self.require(cert.overall);
    }

    pub fn claim(&mut self, report: &ClaimReport) {
        self.line(format!("claim {}: {}", report.claim, verdict(report.passed)));
        for c in &report.checks {
            match &c.residue {
                Some(r) => self.line(format!("  {} {}   residue: {r}", mark(c.passed), c.id)),
                None => self.line(format!("  {} {}", mark(c.passed), c.id)),
            }
        }
        self.result("claim", report);
        self.require(report.passed);
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = match &self.document {
            Some(doc) => match serde_json::to_value(doc).expect("document serializes") {
                Value::Object(m) => m,
                _ => unreachable!("documents serialize to objects"),
            },
            None => Map::new(),
        };
        map.insert("version".into(), Value::from(REPORT_VERSION));
        map.insert("command".into(), to_value(&self.command));
        map.insert("results".into(), to_value(&self.results));
        map.insert("status".into(), Value::from(verdict(self.passed).to_lowercase()));
        Value::Object(map)
    }

    /// Pretty JSON, newline-terminated; byte-stable for equal inputs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self) -> String {
        let mut out = self.command.name.clone();
        for (k, v) in &self.command.args {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!(" --{k} {v}"));
        }
        out.push('\n');
        if let Some(doc) = &self.document {
            out.push_str(&format!("chart: {} ({} coordinates)\n", doc.chart.join(" "), doc.chart.len()));
        }
        for l in &self.human {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("status: {}\n", verdict(self.passed)));
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

pub fn mark(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "FAIL"
    }
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}
