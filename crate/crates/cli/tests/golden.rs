//! Byte-for-byte golden outputs for every verb.
//!
//! Cases live in `tests/golden/cases.json`; the expected stdout of case `n`
//! is `tests/golden/n.out`. Run with `SATDEF_BLESS=1` to rewrite them.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    name: String,
    args: Vec<String>,
    stdin: Option<String>,
    #[serde(default)]
    exit: i32,
}

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(dir().join("cases.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn run(case: &Case) -> (Vec<u8>, i32) {
    let stdin = match &case.stdin {
        Some(f) => Stdio::from(std::fs::File::open(dir().join(f)).unwrap()),
        None => Stdio::null(),
    };
    let out = Command::new(env!("CARGO_BIN_EXE_satdef"))
        .args(&case.args)
        .current_dir(dir())
        .stdin(stdin)
        .output()
        .unwrap();
    (out.stdout, out.status.code().unwrap_or(-1))
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("SATDEF_BLESS").is_some();
    let mut failures = Vec::new();
    for case in cases() {
        let (stdout, code) = run(&case);
        let path = dir().join(format!("{}.out", case.name));
        if bless {
            std::fs::write(&path, &stdout).unwrap();
        }
        if code != case.exit {
            failures.push(format!("{}: exit {code}, expected {}", case.name, case.exit));
            continue;
        }
        let expected = std::fs::read(&path).unwrap_or_default();
        if stdout != expected {
            failures.push(format!(
                "{}: output differs\n--- expected\n{}\n--- got\n{}",
                case.name,
                String::from_utf8_lossy(&expected),
                String::from_utf8_lossy(&stdout)
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_verb_has_a_case() {
    let verbs = [
        "parse",
        "classify",
        "encode",
        "decode",
        "gen-schema",
        "eval",
        "check-model",
        "definables",
        "autos",
        "nequiv",
        "force",
        "build-generic",
        "audit",
        "check-ct",
        "check-compositional",
        "check-proof",
    ];
    let covered: BTreeSet<String> = cases()
        .iter()
        .filter(|c| c.exit == 0)
        .filter_map(|c| c.args.iter().find(|a| !a.starts_with("--")).cloned())
        .collect();
    for v in verbs {
        assert!(covered.contains(v), "no successful golden case for `{v}`");
    }
}

#[test]
fn outputs_are_deterministic() {
    for case in cases().iter().filter(|c| c.exit == 0) {
        assert_eq!(run(case), run(case), "{}", case.name);
    }
}
