//! Golden EDL corpus: each `NAME.edl` has a `NAME.expected.json` holding
//! either the syntax tree and elaboration result, or the parse error.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use hmsim::edl::{elaborate, parse_source};
use serde_json::{json, Value};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

/// What the toolchain makes of one source text.
pub fn observe(source: &str) -> Value {
    match parse_source(source) {
        Err(e) => json!({
            "parse_error": { "line": e.line, "column": e.column, "expected": e.expected }
        }),
        Ok(spec) => {
            let elaboration = match elaborate(&spec) {
                Ok(ex) => json!({ "ok": true, "warnings": ex.warnings.len() }),
                Err(e) => json!({
                    "error": { "kind": e.kind, "line": e.pos.line, "column": e.pos.column }
                }),
            };
            json!({ "ast": spec, "elaboration": elaboration })
        }
    }
}

pub fn sources() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "edl"))
        .collect();
    files.sort();
    files
}

/// Compares every corpus file with its expectation; returns the mismatches.
/// With `HMSIM_BLESS=1` the expectations are rewritten instead.
pub fn check() -> Vec<String> {
    let bless = std::env::var_os("HMSIM_BLESS").is_some();
    let mut failures = Vec::new();
    for path in sources() {
        let source = fs::read_to_string(&path).expect("readable corpus file");
        let observed = observe(&source);
        let expected_path = path.with_extension("expected.json");
        if bless {
            let text = serde_json::to_string_pretty(&observed).unwrap() + "\n";
            fs::write(&expected_path, text).expect("writable corpus");
            continue;
        }
        let expected: Value = match fs::read_to_string(&expected_path) {
            Ok(text) => serde_json::from_str(&text).expect("valid expectation JSON"),
            Err(_) => {
                failures.push(format!("{}: no expectation", path.display()));
                continue;
            }
        };
        if expected != observed {
            failures.push(format!("{}: observed {observed}", path.display()));
        }
    }
    failures
}
