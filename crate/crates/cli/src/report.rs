use serde::Serialize;
use serde_json::{Map, Value as Json};

use dvfield::dvmodel::GeneratorRecord;
use dvfield::Error;

/// The record every successful command prints.
#[derive(Debug, Serialize)]
pub struct Report {
    pub operation: &'static str,
    pub inputs: Map<String, Json>,
    pub output: Json,
    /// Generators adjoined by this invocation.
    pub witness_ledger: Vec<Witness>,
    pub precision_used: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grown_model: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Witness {
    pub generator: String,
    pub exponent: Option<String>,
    pub dtheta: String,
    pub purpose: String,
}

impl From<&GeneratorRecord> for Witness {
    fn from(g: &GeneratorRecord) -> Self {
        Self {
            generator: format!("th{}", g.index),
            exponent: g.exponent.as_ref().map(|e| e.to_string()),
            dtheta: g.dtheta.to_string(),
            purpose: g.purpose.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
}

#[derive(Debug, Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

pub fn error_json(e: &Error) -> String {
    let offset = match e {
        Error::Parse { offset, .. } => Some(*offset),
        _ => None,
    };
    let r = ErrorReport { error: ErrorBody { code: e.code(), message: e.to_string(), offset } };
    serde_json::to_string_pretty(&r).expect("error reports serialize")
}

pub fn to_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

/// `key: value` lines; strings unquoted, everything else as compact JSON.
pub fn to_text(r: &Report) -> String {
    let mut out = String::new();
    if r.operation == "check" {
        for s in r.output["suites"].as_array().into_iter().flatten() {
            out.push_str(&format!(
                "{:<16} cases {:>5}  failures {:>3}  skipped {:>3}  {:>6} ms\n",
                flat(&s["suite"]),
                s["cases"].to_string(),
                s["failures"].to_string(),
                s["skipped"].to_string(),
                s["wall_ms"].to_string()
            ));
            for key in ["first_counterexample", "first_skip"] {
                if let Some(c) = s[key].as_str() {
                    out.push_str(&format!("    {}: {c}\n", key.replace('_', " ")));
                }
            }
        }
        return out;
    }
    match &r.output {
        Json::Object(fields) => {
            for (k, v) in fields {
                out.push_str(&format!("{k}: {}\n", flat(v)));
            }
        }
        other => out.push_str(&format!("{}\n", flat(other))),
    }
    for w in &r.witness_ledger {
        let at = w.exponent.as_deref().map(|e| format!(" at t^{e}")).unwrap_or_default();
        out.push_str(&format!("adjoined {}{at}: d{} = {} ({})\n", w.generator, w.generator, w.dtheta, w.purpose));
    }
    if let Some(p) = &r.grown_model {
        out.push_str(&format!("grown model written to {p}\n"));
    }
    out
}

fn flat(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        other => other.to_string(),
    }
}
