//! Golden-file regression suite: fixed pipelines whose JSON reports are
//! compared byte for byte with the fixture directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::commands::{check, growth, model, prolong, svc, GrowthOptions};
use crate::document::Document;
use crate::error::CliError;
use crate::report::Report;

type Run = fn() -> Result<Report, CliError>;

fn model_doc(name: &str) -> Result<Document, CliError> {
    let raw = model(name, false)?.document.expect("model reports carry a document");
    Document::from_raw(&raw)
}

fn prolonged_doc(name: &str, kind: &str, then: &[&str]) -> Result<Document, CliError> {
    let then: Vec<String> = then.iter().map(|s| s.to_string()).collect();
    let raw = prolong(&model_doc(name)?, kind, &then)?
        .document
        .expect("prolong reports carry a document");
    Document::from_raw(&raw)
}

fn no_opts() -> GrowthOptions {
    GrowthOptions {
        at: None,
        seed: 0,
        max_depth: None,
    }
}

/// Case name (the fixture file stem) and its pipeline.
pub const CASES: &[(&str, Run)] = &[
    ("brackets-F123", || model("F123", true)),
    ("brackets-F23", || model("F23", true)),
    ("brackets-F13", || model("F13", true)),
    ("brackets-F3", || model("F3", true)),
    ("model-example", || model("example", false)),
    ("growth-F3", || growth(&model_doc("F3")?, &no_opts())),
    ("growth-example-random-point", || {
        let opts = GrowthOptions {
            at: Some("random".into()),
            seed: 7,
            max_depth: None,
        };
        growth(&model_doc("example")?, &opts)
    }),
    ("prolong-example-projective", || prolong(&model_doc("example")?, "projective", &[])),
    ("prolong-example-projective-fiber-line", || {
        prolong(&model_doc("example")?, "projective", &["fiber-line".into()])
    }),
    ("prolong-example-dual", || prolong(&model_doc("example")?, "dual", &[])),
    ("prolong-example-dual-svc-cone", || {
        prolong(&model_doc("example")?, "dual", &["svc-cone".into()])
    }),
    ("check-F23-b3-23", || check(&model_doc("F23")?, "b3-23")),
    ("check-F13-b3-13-strict", || check(&model_doc("F13")?, "b3-13-strict")),
    ("check-example-dual-b3-13-strict", || {
        check(&prolonged_doc("example", "dual", &[])?, "b3-13-strict")
    }),
    ("svc-F3-d-full", || svc(&model_doc("F3")?, "svc-d-full")),
    ("svc-example-projective-e-split", || {
        svc(&prolonged_doc("example", "projective", &[])?, "svc-e-split")
    }),
    ("svc-example-dual-l-quadric", || {
        svc(&prolonged_doc("example", "dual", &[])?, "svc-l-quadric")
    }),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Match,
    Mismatch,
    Missing,
    Blessed,
}

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Runs every case; with `bless`, rewrites the fixtures instead of
/// comparing.
pub fn golden(dir: &Path, bless: bool) -> Result<Report, CliError> {
    let mut r = Report::new("golden");
    r.arg("dir", dir.display().to_string());
    if bless {
        r.arg("bless", true);
        fs::create_dir_all(dir)?;
    }
    let mut outcomes = Vec::new();
    for (name, run) in CASES {
        let text = run()?.to_json();
        let path = dir.join(format!("{name}.json"));
        let outcome = if bless {
            fs::write(&path, &text)?;
            Outcome::Blessed
        } else {
            match fs::read_to_string(&path) {
                Ok(old) if old == text => Outcome::Match,
                Ok(_) => Outcome::Mismatch,
                Err(_) => Outcome::Missing,
            }
        };
        let ok = matches!(outcome, Outcome::Match | Outcome::Blessed);
        r.line(format!("  {} {name}", crate::report::mark(ok)));
        r.require(ok);
        outcomes.push((name.to_string(), outcome));
    }
    r.result("cases", outcomes.into_iter().collect::<indexmap::IndexMap<_, _>>());
    Ok(r)
}
