//! Command-line front end.
//!
//! Exit codes: 0 success / holds / related, 1 usage error, 2 input that
//! cannot be read, parsed or validated, 3 negative verdict (synthesis
//! failure, formula violated, models not related, verification failed).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::formula::{parse_formula, Formula};
use crate::lts::{parse_model, KripkeLTS};
use crate::oracle::{verify_all, DEFAULT_SWEEP_BOUND};
use crate::relations::{greatest_partial_bisimulation, greatest_simulation};
use crate::semantics::Checker;
use crate::synthesis::{synthesize, Outcome, SynthesisStats};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NEGATIVE: u8 = 3;

/// Environment variable overriding the sub-model sweep bound of `verify`.
pub const SWEEP_ENV: &str = "CTRLSYNTH_MAX_SWEEP";

#[derive(Parser, Debug)]
#[command(
    name = "ctrlsynth",
    version,
    about = "Controlled system synthesis for Kripke structures with labeled transitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a controlled system for a requirement
    Synth {
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// Where to write the controlled system on success
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check whether the initial state of a model satisfies a formula
    Check {
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Is model A simulated by model B?
    Sim { a: PathBuf, b: PathBuf },
    /// Is model A related to model B by partial bisimulation?
    Pbis { a: PathBuf, b: PathBuf },
    /// Synthesize and check the result with the brute-force oracles
    Verify {
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FormulaArg {
    /// Requirement formula text
    #[arg(short = 'f', long = "formula")]
    inline: Option<String>,
    /// File containing the requirement formula
    #[arg(long = "formula-file")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Kv,
}

enum Failure {
    Usage(String),
    Input(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<KripkeLTS, Failure> {
    parse_model(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_formula(arg: &FormulaArg) -> Result<Formula, Failure> {
    let (text, origin) = match (&arg.inline, &arg.file) {
        (Some(text), None) => (text.clone(), "formula".to_string()),
        (None, Some(path)) => (read(path)?, path.display().to_string()),
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --formula and --formula-file".into(),
            ))
        }
    };
    parse_formula(&text).map_err(|e| Failure::Input(format!("{origin}: {e}")))
}

/// Parses the sweep bound override; `None` means the default.
pub fn sweep_bound(value: Option<&str>) -> Result<usize, String> {
    match value {
        None => Ok(DEFAULT_SWEEP_BOUND),
        Some(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("{SWEEP_ENV} must be a non-negative integer, got `{v}`")),
    }
}

pub fn stats_line(s: &SynthesisStats) -> String {
    format!(
        "iterations={} arcs_initial={} arcs_final={} nodes={}",
        s.iterations, s.arcs_initial, s.arcs_final, s.nodes
    )
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<u8, Failure> {
    let io = |e: std::io::Error| Failure::Input(format!("write failed: {e}"));
    match cmd {
        Command::Synth {
            model,
            formula,
            output,
        } => {
            let m = load_model(&model)?;
            let f = load_formula(&formula)?;
            let res = synthesize(&m, &f);
            match &res.outcome {
                Outcome::Success(c) => {
                    writeln!(out, "SUCCESS").map_err(io)?;
                    writeln!(out, "{}", stats_line(&res.stats)).map_err(io)?;
                    match output {
                        Some(path) => {
                            fs::write(&path, c.to_text())
                                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                            writeln!(out, "wrote {}", path.display()).map_err(io)?;
                        }
                        None => write!(out, "{}", c.to_text()).map_err(io)?,
                    }
                    Ok(EXIT_OK)
                }
                Outcome::Failure(w) => {
                    writeln!(
                        out,
                        "FAILURE: no controlled system found by this construction"
                    )
                    .map_err(io)?;
                    writeln!(out, "{}", stats_line(&res.stats)).map_err(io)?;
                    writeln!(
                        out,
                        "witness: state {} obligation {}",
                        w.plant_name, w.obligation
                    )
                    .map_err(io)?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Check { model, formula } => {
            let m = load_model(&model)?;
            let f = load_formula(&formula)?;
            let mut checker = Checker::new(&m);
            let init = m.initial();
            if checker.holds(init, &f).expect("initial state exists") {
                writeln!(out, "SATISFIED").map_err(io)?;
                return Ok(EXIT_OK);
            }
            writeln!(out, "NOT SATISFIED").map_err(io)?;
            if let Formula::Invariant(g) = &f {
                if let Some(s) = checker.invariant_violation(init, g) {
                    writeln!(out, "first violating state: {}", m.state_name(s)).map_err(io)?;
                }
            }
            Ok(EXIT_NEGATIVE)
        }
        Command::Sim { a, b } => compare(&a, &b, false, out),
        Command::Pbis { a, b } => compare(&a, &b, true, out),
        Command::Verify {
            model,
            formula,
            format,
        } => {
            let bound =
                sweep_bound(std::env::var(SWEEP_ENV).ok().as_deref()).map_err(Failure::Usage)?;
            let m = load_model(&model)?;
            let f = load_formula(&formula)?;
            let report = verify_all(&m, &f, bound).map_err(|e| Failure::Input(e.to_string()))?;
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Kv => report.to_kv(),
            };
            write!(out, "{text}").map_err(io)?;
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
    }
}

fn compare(a: &Path, b: &Path, partial: bool, out: &mut dyn Write) -> Result<u8, Failure> {
    let io = |e: std::io::Error| Failure::Input(format!("write failed: {e}"));
    let (ma, mb) = (load_model(a)?, load_model(b)?);
    let rel = if partial {
        greatest_partial_bisimulation(&ma, &mb).map_err(|e| Failure::Input(e.to_string()))?
    } else {
        greatest_simulation(&ma, &mb)
    };
    match rel {
        Some(r) => {
            writeln!(out, "RELATED").map_err(io)?;
            write!(out, "{r}").map_err(io)?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "NOT RELATED").map_err(io)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

/// Runs the command line `args` (program name first). Results go to `out`,
/// diagnostics to `err`; returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
