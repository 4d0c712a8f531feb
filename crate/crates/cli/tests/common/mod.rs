#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value as Json;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub exit: i32,
}

pub fn cases() -> Vec<Case> {
    let raw = std::fs::read_to_string(golden_dir().join("cases.json")).expect("cases.json");
    let v: Json = serde_json::from_str(&raw).expect("cases.json parses");
    v.as_array()
        .expect("array of cases")
        .iter()
        .map(|c| Case {
            name: c["name"].as_str().unwrap().to_string(),
            args: c["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect(),
            exit: c["exit"].as_i64().unwrap() as i32,
        })
        .collect()
}

/// A fresh working directory holding a copy of `golden/models`, so runs that
/// grow a model never touch the source tree.
pub fn scratch() -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "dvfield-golden-{}-{}",
        std::process::id(),
        N.fetch_add(1, Ordering::Relaxed)
    ));
    let models = dir.join("models");
    std::fs::create_dir_all(&models).unwrap();
    for e in std::fs::read_dir(golden_dir().join("models")).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), models.join(e.file_name())).unwrap();
    }
    dir
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dvfield_in(dir: &Path, args: &[String]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_dvfield")).args(args).current_dir(dir).output().expect("spawn dvfield");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Runs a case with `--json`; the stdout has wall-clock fields zeroed.
pub fn run_case(c: &Case) -> Run {
    let dir = scratch();
    let mut args = vec!["--json".to_string()];
    args.extend(c.args.iter().cloned());
    let mut r = dvfield_in(&dir, &args);
    r.stdout = normalize(&r.stdout);
    let _ = std::fs::remove_dir_all(&dir);
    r
}

pub fn normalize(s: &str) -> String {
    s.lines()
        .map(|l| match l.find("\"wall_ms\": ") {
            Some(i) => {
                let tail = if l.ends_with(',') { "," } else { "" };
                format!("{}\"wall_ms\": 0{tail}", &l[..i])
            }
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let v: Json = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&v).expect("schema compiles")
}

/// Compares a case with its golden file; `UPDATE_GOLDEN=1` rewrites it instead.
/// Returns a description of every discrepancy.
pub fn check_case(c: &Case, validator: &jsonschema::Validator) -> Vec<String> {
    let mut bad = Vec::new();
    let r = run_case(c);
    if r.code != c.exit {
        bad.push(format!("{}: exit {} (expected {}); stderr: {}", c.name, r.code, c.exit, r.stderr.trim()));
    }
    match serde_json::from_str::<Json>(&r.stdout) {
        Ok(doc) => {
            for e in validator.iter_errors(&doc) {
                bad.push(format!("{}: schema: {e} at {}", c.name, e.instance_path));
            }
        }
        Err(e) => bad.push(format!("{}: stdout is not JSON: {e}", c.name)),
    }
    let file = golden_dir().join(format!("{}.json", c.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&file, &r.stdout).unwrap();
    } else {
        match std::fs::read_to_string(&file) {
            Ok(want) if want == r.stdout => {}
            Ok(want) => bad.push(format!("{}: output differs from golden\n--- want\n{want}--- got\n{}", c.name, r.stdout)),
            Err(_) => bad.push(format!("{}: missing golden file {}", c.name, file.display())),
        }
    }
    bad
}

/// `(rank, series)` pairs from `golden/series.txt`.
pub fn corpus() -> Vec<(usize, String)> {
    std::fs::read_to_string(golden_dir().join("series.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (r, s) = l.split_once('\t').expect("rank<TAB>series");
            (r.parse().unwrap(), s.to_string())
        })
        .collect()
}

/// Parse → print → parse through the library and through `dvfield eval`.
pub fn check_roundtrip() -> Vec<String> {
    let mut bad = Vec::new();
    let dir = scratch();
    for (rank, s) in corpus() {
        let x = match dvfield::parse::parse_series(&s, rank) {
            Ok(x) => x,
            Err(e) => {
                bad.push(format!("{s:?}: {e}"));
                continue;
            }
        };
        let printed = x.to_string();
        match dvfield::parse::parse_series(&printed, rank) {
            Ok(y) if y == x && y.to_string() == printed => {}
            Ok(y) => bad.push(format!("{s:?}: reparsed {printed:?} as {y}")),
            Err(e) => bad.push(format!("{s:?}: printed form {printed:?} fails to parse: {e}")),
        }
        let model = format!("models/roundtrip{rank}.toml");
        let args = |series: &str| vec!["--json".into(), "--model".into(), model.clone(), "eval".into(), series.to_string()];
        let first = dvfield_in(&dir, &args(&s));
        let doc: Json = match serde_json::from_str(&first.stdout) {
            Ok(d) => d,
            Err(_) => {
                bad.push(format!("{s:?}: cli eval failed: {}", first.stderr.trim()));
                continue;
            }
        };
        let cli_form = doc["output"]["series"].as_str().unwrap_or_default().to_string();
        if cli_form != printed {
            bad.push(format!("{s:?}: cli printed {cli_form:?}, library {printed:?}"));
        }
        let second = dvfield_in(&dir, &args(&cli_form));
        let again: Json = serde_json::from_str(&second.stdout).unwrap_or(Json::Null);
        if again["output"] != doc["output"] {
            bad.push(format!("{s:?}: cli round trip changed {} to {}", doc["output"], again["output"]));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    bad
}

/// Two identical invocations must print identical bytes.
pub fn check_stability() -> Vec<String> {
    let dir = scratch();
    let mut bad = Vec::new();
    for args in [
        vec!["--json", "check", "leibniz", "--seed", "11"],
        vec!["--json", "game", "--adversary", "t^-1"],
        vec!["--json", "--model", "models/theta.toml", "specialize", "1, th1*t"],
    ] {
        let args: Vec<String> = args.into_iter().map(String::from).collect();
        let (a, b) = (dvfield_in(&dir, &args), dvfield_in(&dir, &args));
        if normalize(&a.stdout) != normalize(&b.stdout) {
            bad.push(format!("{args:?}: output differs between runs"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    bad
}
