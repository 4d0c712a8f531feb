mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit status of `check` when a suite finds a violation.
const VIOLATION: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(r) => {
            let text = if cli.json { report::to_json(&r) + "\n" } else { report::to_text(&r) };
            emit(&text);
            if let Command::Check { .. } = cli.command {
                if r.output["failures"].as_u64().unwrap_or(0) > 0 {
                    for s in r.output["suites"].as_array().into_iter().flatten() {
                        if let Some(c) = s["first_counterexample"].as_str() {
                            eprintln!("{}: {c}", s["suite"].as_str().unwrap_or("?"));
                        }
                    }
                    return ExitCode::from(VIOLATION);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                emit(&(report::error_json(&e) + "\n"));
            }
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}
