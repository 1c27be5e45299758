//! Command-line front end for the supertropical matrix engine.
//!
//! Every subcommand reads one JSON input file (a matrix or a system of
//! generators), runs a deterministic computation, and writes a report to
//! standard output or `--output`.  Equal invocations produce byte-identical
//! reports, in both the human and the JSON format.
//!
//! All indices in reports are 1-based: vertices, rows, columns, generator
//! labels, and permutations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use supertropical::digraph::max_cycle_mean;
use supertropical::io::{encode_ext_real, encode_matrix, parse_input, InputDocument};
use supertropical::lie::{
    BracketWord, SeriesTermination, TriangularizationOutcome, DEFAULT_LEVEL_CAP,
    DEFAULT_MAX_DEPTH,
};
use supertropical::selftest;

const AFTER_HELP: &str = "\
Exit codes:
  0  success; for `check` and `triangularize`, the input is nilpotent
  1  decided not nilpotent (`check`, `triangularize`), or selftest failures
  2  usage, input, or I/O errors

Input files:
  matrix  {\"n\": N, \"entries\": [[...], ...]}   N rows of N scalars
  system  {\"n\": N, \"generators\": [matrix, ...]}
  scalar  \"eps\" | number | [value, ghost] where each slot is a number or \"eps\"";

/// Exact max-plus matrix algebra with ghost tracking: nilpotency decisions,
/// simultaneous triangularization with certificates, series, and spectra.
#[derive(Parser)]
#[command(name = "supertropical", version, about, after_help = AFTER_HELP)]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write the report to this file instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the input (matrix or system) is nilpotent
    Check {
        /// Input JSON file
        input: PathBuf,
    },
    /// Find one permutation taking every generator strictly above the
    /// diagonal, or certify that none exists
    Triangularize {
        /// Input JSON file
        input: PathBuf,
    },
    /// Print the non-nilpotency certificate word and its value
    Certificate {
        /// Input JSON file
        input: PathBuf,
    },
    /// Compute lower central series level sizes and their termination
    Lcs {
        /// Input JSON file
        input: PathBuf,
        /// Deepest level to compute
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// Bound on distinct elements per level
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        cap: usize,
    },
    /// Maximum cycle mean over the support of a single matrix
    Spectrum {
        /// Input JSON file
        input: PathBuf,
    },
    /// Evaluate a bracket word such as "(bracket g1 (bracket g2 g3))"
    Bracket {
        /// Input JSON file
        input: PathBuf,
        /// The word: gN, (bracket w w), (sum w...), or (pow w N)
        word: String,
    },
    /// Raise a single matrix to the k-th power
    Power {
        /// Input JSON file
        input: PathBuf,
        /// Exponent, at least 1
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        exponent: u32,
    },
    /// Run the built-in randomized verification suites
    Selftest {
        /// Seed for the deterministic corpora
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn ok(text: String) -> Report {
        Report { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, report.text.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    let format = cli.format;
    match &cli.command {
        Command::Check { input } => Ok(check(load(input)?, format)),
        Command::Triangularize { input } => Ok(triangularize(load(input)?, format)),
        Command::Certificate { input } => Ok(certificate(load(input)?, format)),
        Command::Lcs {
            input,
            max_depth,
            cap,
        } => Ok(lcs(load(input)?, format, *max_depth, *cap)),
        Command::Spectrum { input } => spectrum(load(input)?, format),
        Command::Bracket { input, word } => bracket(load(input)?, format, word),
        Command::Power { input, exponent } => power(load(input)?, format, *exponent as usize),
        Command::Selftest { seed } => Ok(selftest_report(format, *seed)),
    }
}

fn load(path: &Path) -> Result<InputDocument, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_input(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn json_line(value: Value) -> String {
    let mut text = value.to_string();
    text.push('\n');
    text
}

fn verdict(nilpotent: bool) -> &'static str {
    if nilpotent {
        "nilpotent"
    } else {
        "not_nilpotent"
    }
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|&v| v + 1).collect()
}

fn check(doc: InputDocument, format: Format) -> Report {
    let sys = doc.into_system();
    let nilpotent = sys.support().find_cycle().is_none();
    let text = match format {
        Format::Human => format!("{}\n", if nilpotent { "NILPOTENT" } else { "NOT_NILPOTENT" }),
        Format::Json => json_line(json!({ "result": verdict(nilpotent) })),
    };
    Report {
        text,
        code: u8::from(!nilpotent),
    }
}

fn triangularize(doc: InputDocument, format: Format) -> Report {
    let sys = doc.into_system();
    match sys.decide() {
        TriangularizationOutcome::Success {
            permutation,
            conjugated,
        } => {
            let text = match format {
                Format::Human => {
                    let mut out = String::from("NILPOTENT\n");
                    writeln!(out, "permutation: {}", permutation.one_line()).unwrap();
                    for (k, g) in conjugated.iter().enumerate() {
                        writeln!(out, "generator {}:", k + 1).unwrap();
                        writeln!(out, "{g}").unwrap();
                    }
                    out
                }
                Format::Json => json_line(json!({
                    "result": "nilpotent",
                    "permutation": one_based(permutation.as_slice()),
                    "matrices": conjugated.iter().map(encode_matrix).collect::<Vec<_>>(),
                })),
            };
            Report::ok(text)
        }
        TriangularizationOutcome::Failure {
            cycle,
            certificate,
            certificate_value,
        } => {
            let text = match format {
                Format::Human => {
                    let mut out = String::from("NOT_NILPOTENT\n");
                    writeln!(out, "cycle: {cycle}").unwrap();
                    writeln!(out, "certificate: {certificate}").unwrap();
                    writeln!(out, "certificate value:").unwrap();
                    writeln!(out, "{certificate_value}").unwrap();
                    out
                }
                Format::Json => json_line(json!({
                    "result": "not_nilpotent",
                    "cycle": one_based(cycle.vertices()),
                    "certificate": certificate.to_string(),
                    "certificate_value": encode_matrix(&certificate_value),
                })),
            };
            Report { text, code: 1 }
        }
    }
}

fn certificate(doc: InputDocument, format: Format) -> Report {
    let sys = doc.into_system();
    let text = match (sys.decide(), format) {
        (TriangularizationOutcome::Success { .. }, Format::Human) => "NILPOTENT\n".to_string(),
        (TriangularizationOutcome::Success { .. }, Format::Json) => {
            json_line(json!({ "result": "nilpotent" }))
        }
        (
            TriangularizationOutcome::Failure {
                certificate,
                certificate_value,
                ..
            },
            Format::Human,
        ) => format!("{certificate}\n{certificate_value}\n"),
        (
            TriangularizationOutcome::Failure {
                certificate,
                certificate_value,
                ..
            },
            Format::Json,
        ) => json_line(json!({
            "result": "certificate",
            "word": certificate.to_string(),
            "value": encode_matrix(&certificate_value),
        })),
    };
    Report::ok(text)
}

fn lcs(doc: InputDocument, format: Format, max_depth: usize, cap: usize) -> Report {
    let sys = doc.into_system();
    let series = sys.lower_central_series(max_depth, cap);
    let counts: Vec<usize> = series.levels.iter().map(Vec::len).collect();
    let text = match format {
        Format::Human => {
            let mut out = String::new();
            for (k, count) in counts.iter().enumerate() {
                writeln!(out, "level {k}: {count}").unwrap();
            }
            let line = match series.termination {
                SeriesTermination::Vanished { index } => {
                    format!("termination: vanished at index {index}")
                }
                SeriesTermination::ReachedMaxDepth { max_depth } => {
                    format!("termination: no vanishing within depth {max_depth}")
                }
                SeriesTermination::Truncated { level, cap } => {
                    format!("termination: level {level} exceeded cap {cap}")
                }
            };
            writeln!(out, "{line}").unwrap();
            out
        }
        Format::Json => {
            let termination = match series.termination {
                SeriesTermination::Vanished { index } => {
                    json!({ "kind": "vanished", "index": index })
                }
                SeriesTermination::ReachedMaxDepth { max_depth } => {
                    json!({ "kind": "max_depth", "max_depth": max_depth })
                }
                SeriesTermination::Truncated { level, cap } => {
                    json!({ "kind": "truncated", "level": level, "cap": cap })
                }
            };
            json_line(json!({
                "result": "ok",
                "levels": counts,
                "termination": termination,
            }))
        }
    };
    Report::ok(text)
}

fn spectrum(doc: InputDocument, format: Format) -> Result<Report, String> {
    let matrix = doc.into_matrix().map_err(|e| e.to_string())?;
    let mean = max_cycle_mean(&matrix);
    let text = match format {
        Format::Human => format!("{mean}\n"),
        Format::Json => json_line(json!({
            "result": "ok",
            "spectrum": encode_ext_real(mean),
        })),
    };
    Ok(Report::ok(text))
}

fn bracket(doc: InputDocument, format: Format, word_text: &str) -> Result<Report, String> {
    let sys = doc.into_system();
    let word = BracketWord::parse(word_text).map_err(|e| format!("bad word: {e}"))?;
    let value = word.evaluate(&sys).map_err(|e| e.to_string())?;
    let text = match format {
        Format::Human => format!("{value}\n"),
        Format::Json => json_line(json!({
            "result": "ok",
            "matrix": encode_matrix(&value),
        })),
    };
    Ok(Report::ok(text))
}

fn power(doc: InputDocument, format: Format, exponent: usize) -> Result<Report, String> {
    let matrix = doc.into_matrix().map_err(|e| e.to_string())?;
    let value = matrix.pow(exponent);
    let text = match format {
        Format::Human => format!("{value}\n"),
        Format::Json => json_line(json!({
            "result": "ok",
            "matrix": encode_matrix(&value),
        })),
    };
    Ok(Report::ok(text))
}

fn selftest_report(format: Format, seed: u64) -> Report {
    let reports = selftest::run_all(seed);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let text = match format {
        Format::Human => {
            let mut out = String::new();
            for r in &reports {
                if r.passed() {
                    writeln!(out, "{}: PASS ({} cases)", r.name, r.cases).unwrap();
                } else {
                    writeln!(out, "{}: FAIL ({} failures)", r.name, r.failures.len()).unwrap();
                    for f in &r.failures {
                        writeln!(out, "  - {f}").unwrap();
                    }
                }
            }
            if failed == 0 {
                writeln!(out, "selftest: PASS ({} suites)", reports.len()).unwrap();
            } else {
                writeln!(out, "selftest: FAIL ({failed} of {} suites)", reports.len()).unwrap();
            }
            out
        }
        Format::Json => {
            let suites: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "cases": r.cases,
                        "failures": r.failures,
                    })
                })
                .collect();
            json_line(json!({
                "result": if failed == 0 { "pass" } else { "fail" },
                "seed": seed,
                "suites": suites,
            }))
        }
    };
    Report {
        text,
        code: u8::from(failed > 0),
    }
}
