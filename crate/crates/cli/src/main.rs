use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

mod commands;
mod report;

use report::{Report, Timing, Verdict};

/// Verifies graph-of-groups constructions and the p-group counterexample.
///
/// Every subcommand writes one JSON record per line. Exit status: 0 when every
/// verdict passes, 1 on a failed or errored check, 2 on usage errors or
/// malformed input.
#[derive(Debug, Parser)]
#[command(name = "gog", version)]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write reports here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Human-readable output instead of JSON lines.
    #[arg(long, global = true)]
    pretty: bool,
    /// Progress messages on standard error.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Presentation of the fundamental group of a graph of groups file.
    BuildPresentation {
        file: PathBuf,
        /// Comma-separated spanning tree edges (default: a deterministic tree).
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<String>>,
    },
    /// <lambda, mu> on Z/p^l is a p-group of exponent dividing p^l.
    #[command(name = "verify-prop41")]
    VerifyProp41 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        l: u32,
    },
    /// <alpha, beta> is a p-group and pi : P_n -> W_n is checked on relators
    /// and by enumeration of A_n and B_n (n = p^l <= 9).
    #[command(name = "verify-prop42")]
    VerifyProp42 {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        l: u32,
    },
    /// alpha_inf^-1 beta_inf has infinite order, [mu_inf, lambda_inf] shifts by p,
    /// and random elements of P_inf get separation certificates.
    #[command(name = "verify-prop43")]
    VerifyProp43 {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[arg(long, default_value_t = 100)]
        bound: i64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// The graph of groups with non-residually-p fundamental group over a graph
    /// file, with kernel witnesses in finite p-quotients.
    #[command(name = "build-theorem3")]
    BuildTheorem3 {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Largest exponent k of the wreath quotients W_{p^k} to try.
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
    /// Separation certificate for an element of P_inf given as JSON
    /// `{"p": 2, "vector": {"0": 1}, "control": "a b"}`.
    Separate { file: PathBuf },
    /// Truncated unfolding of a tree file, with embedding checks.
    Unfold {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Base vertex (default: the first vertex).
        #[arg(long)]
        base: Option<String>,
        /// Order of the cyclic vertex groups used by the algebraic check.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Semidirect model of P_n against amalgam normal forms on random words.
    CrossCheck {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

/// Why a command did not produce a verdict.
pub enum Failure {
    /// Unreadable or malformed input.
    Input(String),
    /// The check itself raised an error.
    Run(String),
}

impl From<gog_core::Error> for Failure {
    fn from(e: gog_core::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

pub type Outcome = Result<(bool, Value), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let trace = |msg: &str| {
        if cli.trace {
            eprintln!("[gog] {msg}");
        }
    };
    let (claim, mut parameters) = describe(&cli.command);
    if let Value::Object(m) = &mut parameters {
        m.insert("seed".into(), json!(cli.seed));
    }
    trace(&format!("running {claim}"));
    let start = Instant::now();
    let outcome = commands::run(&cli.command, cli.seed, &trace);
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let (verdict, witness, code) = match outcome {
        Ok((ok, w)) => (Verdict::from_bool(ok), w, if ok { 0 } else { 1 }),
        Err(Failure::Input(msg)) => {
            eprintln!("gog: {msg}");
            (Verdict::Error, json!({ "error": msg }), 2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("gog: {msg}");
            (Verdict::Error, json!({ "error": msg }), 1)
        }
    };
    trace(&format!("{claim} finished in {millis:.1} ms"));
    let report = Report {
        claim: claim.into(),
        parameters,
        verdict,
        witness,
        timing: Timing { millis },
    };
    if let Err(e) = emit(&report, cli.out.as_ref(), cli.pretty) {
        eprintln!("gog: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn emit(report: &Report, out: Option<&PathBuf>, pretty: bool) -> io::Result<()> {
    let line = if pretty {
        report.pretty()
    } else {
        serde_json::to_string(report).map_err(io::Error::other)?
    };
    match out {
        Some(path) => writeln!(File::create(path)?, "{line}"),
        None => writeln!(io::stdout().lock(), "{line}"),
    }
}

fn describe(c: &Command) -> (&'static str, Value) {
    match c {
        Command::BuildPresentation { file, tree } => {
            ("presentation", json!({ "file": file, "tree": tree }))
        }
        Command::VerifyProp41 { p, l } => ("prop4.1", json!({ "p": p, "l": l })),
        Command::VerifyProp42 { p, l } => ("prop4.2", json!({ "p": p, "l": l })),
        Command::VerifyProp43 {
            p,
            steps,
            bound,
            samples,
        } => (
            "prop4.3",
            json!({ "p": p, "steps": steps, "bound": bound, "samples": samples }),
        ),
        Command::BuildTheorem3 { file, p, levels } => (
            "theorem3",
            json!({ "file": file, "p": p, "levels": levels }),
        ),
        Command::Separate { file } => ("separation", json!({ "file": file })),
        Command::Unfold {
            file,
            radius,
            base,
            order,
        } => (
            "unfold",
            json!({ "file": file, "radius": radius, "base": base, "order": order }),
        ),
        Command::CrossCheck {
            p,
            n,
            trials,
            sequential,
        } => (
            "cross-check",
            json!({ "p": p, "n": n, "trials": trials, "sequential": sequential }),
        ),
    }
}
