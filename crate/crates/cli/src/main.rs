//! `jpgeom`: seeded verification suites and one-shot JSON computations.

mod compute;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jpgeom::json::parse_ring;
use jpgeom::verify::{run_suite, Convention, SuiteConfig, UsageError, SUITES};
use jpgeom::RingDescriptor;
use serde_json::{json, Value};

use crate::compute::{compute, CliError};

#[derive(Parser)]
#[command(name = "jpgeom", version, about = "Jordan-pair geometry: verification suites and computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded verification suite and print its report.
    Verify {
        #[arg(long)]
        suite: String,
        /// rational, float64 or fp:P
        #[arg(long, default_value = "rational", value_parser = ring_arg)]
        ring: RingDescriptor,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Truncation order of the tanh series.
        #[arg(long, default_value_t = jpgeom::symspace::DEFAULT_SERIES_ORDER)]
        order: usize,
        #[arg(long, default_value = "ad")]
        convention: Convention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one JSON request read from --in or stdin.
    Compute {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Default ring when the request has none.
        #[arg(long, value_parser = ring_arg)]
        ring: Option<RingDescriptor>,
        /// Default convention when the request has none.
        #[arg(long)]
        convention: Option<Convention>,
    },
    /// List the available suites.
    ListSuites {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn ring_arg(s: &str) -> Result<RingDescriptor, String> {
    parse_ring(s).map_err(|e| e.to_string())
}

fn emit(value: &Value, out: Option<&PathBuf>) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn finish(value: Value, out: Option<&PathBuf>, code: u8) -> ExitCode {
    match emit(&value, out) {
        Ok(()) => ExitCode::from(code),
        Err(e) => {
            eprintln!("jpgeom: cannot write output: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::ListSuites { out } => {
            let list: Vec<Value> = SUITES.iter().map(|(name, about)| json!({"name": name, "description": about})).collect();
            finish(Value::Array(list), out.as_ref(), 0)
        }
        Command::Verify { suite, ring, n, trials, seed, tol, order, convention, out } => {
            let cfg = SuiteConfig { suite, ring, n, trials, seed, tol, order, convention };
            match run_suite(&cfg) {
                Ok(report) => {
                    eprintln!(
                        "{}: {} passed, {} failed, {} skipped in {:.1} ms",
                        report.suite, report.passed, report.failed, report.skipped, report.wall_time_ms
                    );
                    let code = if report.ok() { 0 } else { 1 };
                    finish(serde_json::to_value(&report).expect("reports serialize"), out.as_ref(), code)
                }
                Err(e) => {
                    eprintln!("jpgeom: {e}");
                    let name = match e {
                        UsageError::UnknownSuite(_) => "UnknownSuite",
                        UsageError::UnsupportedRing { .. } => "UnsupportedRing",
                        UsageError::BadConfig(_) => "BadConfig",
                    };
                    finish(json!({"error": name, "detail": e.to_string()}), out.as_ref(), 2)
                }
            }
        }
        Command::Compute { input, out, ring, convention } => {
            let text = match &input {
                Some(path) => fs::read_to_string(path),
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).map(|_| s)
                }
            };
            let text = match text {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("jpgeom: cannot read request: {e}");
                    return finish(json!({"error": "Io"}), out.as_ref(), 2);
                }
            };
            let request: Value = match serde_json::from_str(&text) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("jpgeom: malformed JSON: {e}");
                    return finish(json!({"error": "MalformedJson"}), out.as_ref(), 2);
                }
            };
            let defaults = compute::Defaults {
                ring: ring.unwrap_or(RingDescriptor::Rational),
                convention: convention.unwrap_or(Convention::Ad),
            };
            match compute(&request, &defaults) {
                Ok(v) => finish(v, out.as_ref(), 0),
                Err(CliError::Usage(msg)) => {
                    eprintln!("jpgeom: {msg}");
                    finish(json!({"error": "BadRequest", "detail": msg}), out.as_ref(), 2)
                }
                Err(CliError::Domain(e)) => {
                    eprintln!("jpgeom: {e}");
                    finish(json!({"error": e.name()}), out.as_ref(), 1)
                }
            }
        }
    }
}
