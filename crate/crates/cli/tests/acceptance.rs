//! One line per acceptance criterion; exits nonzero if any is red.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use dvfield::ctrexgame::{adversary_corpus, GameModel};
use dvfield::suites::{run_suite, SuiteReport, SUITES};

const SEED: u64 = 7;
const BUDGET_SECS: u64 = 60;

/// Criterion number, title, suite.
const CRITERIA: &[(u8, &str, &str)] = &[
    (1, "field/valuation laws", "field-laws"),
    (2, "Leibniz and log-derivation axiom", "leibniz"),
    (3, "∂ of differences lands in D", "diffs"),
    (4, "Newton root counts", "newton"),
    (5, "valuative Rolle", "rolle"),
    (6, "ς₂ closed form and GL₂ equivariance", "specialize"),
    (7, "ŵres is a ring homomorphism on R", "wres-hom"),
    (8, "val_∂ laws", "vp-laws"),
    (9, "neutralizer contract", "neutralizer"),
    (10, "reduce_triple", "reduce3"),
    (11, "solve_density exactness", "density"),
    (12, "refute_vtopology", "vtopology"),
    (13, "double mutation", "double-mutation"),
    (14, "game σ certificates", "game"),
    (15, "split_radical", "split-radical"),
];

fn expected_cases(suite: &str, plays: usize) -> usize {
    let n = SUITES.iter().find(|(s, _)| *s == suite).map(|(_, n)| *n).unwrap_or(0);
    if suite == "game" {
        n + plays
    } else {
        n
    }
}

fn judge(r: &SuiteReport, want: usize) -> Result<String, String> {
    let summary = format!("{} cases, {} failures, {} skipped", r.cases, r.failures, r.skipped);
    if r.cases != want {
        return Err(format!("{summary}; expected exactly {want} cases"));
    }
    if r.failures > 0 {
        return Err(format!("{summary}; first: {}", r.first_counterexample.as_deref().unwrap_or("?")));
    }
    if r.skipped > 0 {
        return Err(format!("{summary}; first skip: {}", r.first_skip.as_deref().unwrap_or("?")));
    }
    Ok(summary)
}

fn line(n: u8, title: &str, verdict: &Result<String, String>, ms: u128) {
    let (tag, detail) = match verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("[{tag}] {n:>2}. {title}: {detail} ({ms} ms)");
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut red = 0;
    let gm = GameModel::default();
    let plays = adversary_corpus(&gm).map(|c| c.len()).unwrap_or(0);

    for &(n, title, suite) in CRITERIA {
        let t = Instant::now();
        let mut verdict = match run_suite(suite, SEED) {
            Ok(r) => judge(&r, expected_cases(suite, plays)),
            Err(e) => Err(e.to_string()),
        };
        if n == 14 && verdict.is_ok() && plays < 30 {
            verdict = Err(format!("corpus has {plays} plays; at least 30 are required"));
        }
        if n == 14 {
            if let Ok(d) = &mut verdict {
                d.push_str(&format!(" ({plays} corpus plays, ≥ 10 replies each)"));
            }
        }
        red += verdict.is_err() as usize;
        line(n, title, &verdict, t.elapsed().as_millis());
    }

    let t = Instant::now();
    let validator = common::schema();
    let cases = common::cases();
    let mut bad: Vec<String> = cases.iter().flat_map(|c| common::check_case(c, &validator)).collect();
    bad.extend(common::check_roundtrip());
    bad.extend(common::check_stability());
    let verdict = if bad.is_empty() {
        Ok(format!("{} golden reports, {} corpus series", cases.len(), common::corpus().len()))
    } else {
        Err(bad.join("; "))
    };
    red += verdict.is_err() as usize;
    line(16, "CLI golden files, schema, round trip, stability", &verdict, t.elapsed().as_millis());

    let secs = start.elapsed().as_secs_f64();
    let in_budget = secs < BUDGET_SECS as f64;
    println!(
        "{} criteria red; total {secs:.1} s ({} the {BUDGET_SECS} s budget)",
        red,
        if in_budget { "within" } else { "over" }
    );
    if red == 0 && in_budget {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
