//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or classification failure, 2 usage error,
//! 3 sampling budget exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::families::z5::z5_component_counts;
use crate::field::FieldSpec;
use crate::geometry::line_in_q;
use crate::sampler::{sample_many, SampleError, SamplerConfig, Strategy, DEFAULT_BRUTE_FORCE_CUTOFF, DEFAULT_BUDGET};
use crate::store::{classify_record, LineRecord, LineStore};
use crate::strata::TorsionSpace;
use crate::verify::{self, Theorem, DEFAULT_POINTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable holding the default field (`p31`, `q`, ...).
pub const FIELD_ENV: &str = "GODEAUX_FIELD";

#[derive(Debug, Parser)]
#[command(name = "godeaux-lines", version, about = "Lines in the Pfaffian quadric intersection Q in P^11")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample lines in Q and write them to a line store.
    Sample {
        /// generic, torsion[:01|23], two-torsion[:01|23,02|13], hyp, two-hyp
        #[arg(long, default_value = "generic")]
        strategy: String,
        /// Field such as p31 or q [default: p31]
        #[arg(long, env = FIELD_ENV)]
        field: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output store; records are appended when it exists. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CUTOFF)]
        brute_force_cutoff: u64,
        /// Record the wall-clock time in each record's provenance.
        #[arg(long)]
        timestamp: bool,
    },
    /// Classify every record of a line store; one JSON object per line on stdout.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run a verifier and print its certificate.
    Verify {
        /// hyp-param, para-v2, z5-family, z3-param, z3-kernel, torsion-spaces, symmetries
        theorem: String,
        /// Field such as q or p10007 [default: q]
        #[arg(long, env = FIELD_ENV)]
        field: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random parameter points for sampled checks.
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
    /// Components of the lines joining two torsion spaces.
    Components {
        /// Two distinct spaces, e.g. 01|23,02|13; all three pairs when omitted.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, env = FIELD_ENV)]
        field: Option<String>,
    },
}

fn parse_field(text: Option<&str>, default: FieldSpec) -> Result<FieldSpec, String> {
    match text {
        None => Ok(default),
        Some(t) => t.parse().map_err(|e: crate::field::FieldError| e.to_string()),
    }
}

fn print_json(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Runs the CLI on `args` (including the program name), writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let usage = |err: &mut dyn Write, msg: String| {
        let _ = writeln!(err, "error: {msg}");
        EXIT_USAGE
    };
    match cli.command {
        Command::Sample {
            strategy,
            field,
            seed,
            count,
            out: path,
            budget,
            brute_force_cutoff,
            timestamp,
        } => {
            let strategy: Strategy = match strategy.parse() {
                Ok(s) => s,
                Err(e) => return usage(err, e.to_string()),
            };
            let field = match parse_field(field.as_deref(), FieldSpec::Prime(31)) {
                Ok(f) => f,
                Err(e) => return usage(err, e),
            };
            let config = SamplerConfig {
                budget,
                brute_force_cutoff,
            };
            let mut store = match &path {
                Some(p) if p.exists() => match LineStore::load(p) {
                    Ok(s) => s,
                    Err(e) => return usage(err, format!("{}: {e}", p.display())),
                },
                _ => LineStore::default(),
            };
            let stamp = timestamp.then(|| {
                let secs = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                format!("unix:{secs}")
            });
            let results = sample_many(strategy, field, seed, count, &config);
            let (mut ok, mut budget_failures) = (0, 0);
            for (i, r) in results.into_iter().enumerate() {
                let s = seed.wrapping_add(i as u64);
                match r {
                    Ok(sample) => {
                        assert!(line_in_q(&sample.line));
                        let mut rec = LineRecord::from_sample(&sample);
                        rec.provenance.timestamp = stamp.clone();
                        store.push(&rec);
                        ok += 1;
                    }
                    Err(e) => {
                        if matches!(e, SampleError::BudgetExhausted { .. }) {
                            budget_failures += 1;
                        }
                        let _ = writeln!(err, "seed {s}: {e}");
                        store.failures.push(json!({
                            "strategy": strategy.to_string(),
                            "seed": s.to_string(),
                            "error": e.to_string(),
                        }));
                    }
                }
            }
            match &path {
                Some(p) => {
                    if let Err(e) = store.save(p) {
                        let _ = writeln!(err, "error: {}: {e}", p.display());
                        return EXIT_FAIL;
                    }
                }
                None => {
                    let _ = write!(out, "{}", store.to_text());
                }
            }
            if ok == 0 && count > 0 {
                if budget_failures > 0 {
                    EXIT_BUDGET
                } else {
                    EXIT_FAIL
                }
            } else {
                EXIT_OK
            }
        }
        Command::Classify { input } => {
            let store = match LineStore::load(&input) {
                Ok(s) => s,
                Err(e) => return usage(err, format!("{}: {e}", input.display())),
            };
            let lines: Vec<Value> = store
                .records
                .par_iter()
                .enumerate()
                .map(|(i, rec)| match classify_record(rec) {
                    Ok(r) => json!({ "index": i, "report": r.to_json() }),
                    Err(e) => json!({ "index": i, "error": e.to_string() }),
                })
                .collect();
            for l in &lines {
                let _ = writeln!(out, "{}", serde_json::to_string(l).expect("serializable"));
            }
            EXIT_OK
        }
        Command::Verify {
            theorem,
            field,
            seed,
            points,
        } => {
            let theorem: Theorem = match theorem.parse() {
                Ok(t) => t,
                Err(e) => return usage(err, e),
            };
            let field = match parse_field(field.as_deref(), FieldSpec::Rational) {
                Ok(f) => f,
                Err(e) => return usage(err, e),
            };
            let cert = verify::run(theorem, field, seed, points);
            print_json(out, &cert.to_json());
            if cert.passed() {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Command::Components { pair, field } => {
            let field = match parse_field(field.as_deref(), FieldSpec::Rational) {
                Ok(f) => f,
                Err(e) => return usage(err, e),
            };
            let pairs = match pair {
                None => vec![
                    (TorsionSpace::T01_23, TorsionSpace::T02_13),
                    (TorsionSpace::T01_23, TorsionSpace::T03_12),
                    (TorsionSpace::T02_13, TorsionSpace::T03_12),
                ],
                Some(p) => {
                    let parsed = p
                        .split_once(',')
                        .ok_or_else(|| format!("expected two spaces separated by a comma, got {p:?}"))
                        .and_then(|(a, b)| Ok((a.parse::<TorsionSpace>()?, b.parse::<TorsionSpace>()?)));
                    match parsed {
                        Ok(x) => vec![x],
                        Err(e) => return usage(err, e),
                    }
                }
            };
            let mut reports = Vec::new();
            for (a, b) in pairs {
                match z5_component_counts(a, b, field) {
                    Ok(c) => reports.push(c.to_json()),
                    Err(e) => return usage(err, e.to_string()),
                }
            }
            print_json(out, &json!(reports));
            EXIT_OK
        }
    }
}

/// Runs the CLI with process arguments and standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
