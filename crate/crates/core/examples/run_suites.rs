//! Runs every invariant suite once and prints a summary line per suite.

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    for r in dvfield::suites::run_all(seed) {
        println!(
            "{:16} cases {:5} failures {:3} skipped {:3} {:6} ms",
            r.suite, r.cases, r.failures, r.skipped, r.wall_ms
        );
        if let Some(c) = &r.first_counterexample {
            println!("    first counterexample: {c}");
        }
        if let Some(c) = &r.first_skip {
            println!("    first skip: {c}");
        }
    }
}
