//! `sumnet`: decompose, analyze, decide and synthesize codes for
//! three-source sum-networks.
//!
//! Exit status: 0 success or feasible, 1 infeasible or failed verification,
//! 2 unknown or oracle budget exceeded, 3 error, 4 source count other than 3.

mod commands;
mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sumnet_core::decide::DecideOptions;
use sumnet_core::verify::OracleConfig;

use commands::{GenKind, GenParams, Output};

const ERROR: u8 = 3;
const WRONG_SOURCES: u8 = 4;

#[derive(Parser)]
#[command(name = "sumnet", version, about = "Solvability and code synthesis for three-source sum-networks")]
struct Cli {
    /// Smallest field size allowed for synthesized codes.
    #[arg(long, global = true, default_value_t = 0)]
    field_min: u64,
    /// Seed for `gen` and `oracle --agreement`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Spaces per indentation level in JSON output; 0 prints one line.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basic region decomposition of a network, as a region-graph document.
    Decompose {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Structure maps (Π, Ω, Λ) and connectivity of a network or region graph.
    Analyze {
        /// Input files; several run independently and print an array.
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Feasibility verdict with witness or partition.
    Decide {
        /// Input files; several run independently and print an array.
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Writes a verified code when feasible, otherwise the verdict.
    Synthesize {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the verdict document here.
        #[arg(long)]
        verdict: Option<PathBuf>,
    },
    /// Checks a code document against a network or region graph.
    Verify {
        instance: PathBuf,
        /// Code document; stdin when omitted.
        code: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generates a seeded random instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[command(flatten)]
        params: GenParams,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive search for a region code over small prime fields.
    Oracle {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = OracleConfig::default().max_coding)]
        max_coding: usize,
        /// Search nodes allowed per prime.
        #[arg(long, default_value_t = OracleConfig::default().budget)]
        budget: u64,
        /// Instead of reading an instance, compare decide against the oracle
        /// on this many random graphs starting at --seed.
        #[arg(long, conflicts_with = "input")]
        agreement: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn error_status(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<sumnet_core::Error>() {
        Some(sumnet_core::Error::UnsupportedSources(_)) => WRONG_SOURCES,
        _ => ERROR,
    }
}

/// Runs `f` on each input in its own thread; one failing file does not
/// affect the others.
fn batch(inputs: &[PathBuf], f: impl Fn(Option<&Path>) -> Result<Output> + Sync) -> Result<Output> {
    if inputs.len() <= 1 {
        return f(inputs.first().map(PathBuf::as_path));
    }
    let results: Vec<(Value, u8)> = std::thread::scope(|s| {
        let handles: Vec<_> = inputs.iter().map(|p| s.spawn(|| f(Some(p)))).collect();
        inputs
            .iter()
            .zip(handles)
            .map(|(p, h)| {
                let input = p.display().to_string();
                match h.join() {
                    Ok(Ok(out)) => (json!({"input": input, "status": out.status, "result": out.doc}), out.status),
                    Ok(Err(e)) => {
                        let status = error_status(&e);
                        (json!({"input": input, "status": status, "error": format!("{e:#}")}), status)
                    }
                    Err(_) => (json!({"input": input, "status": ERROR, "error": "panicked"}), ERROR),
                }
            })
            .collect()
    });
    let status = results.iter().map(|r| r.1).max().unwrap_or(0);
    Ok(Output { doc: Value::Array(results.into_iter().map(|r| r.0).collect()), status })
}

fn run(cli: Cli) -> Result<u8> {
    let opts = DecideOptions { field_min: cli.field_min };
    let indent = cli.json_indent;
    let (out, path) = match cli.command {
        Command::Decompose { input, output } => (commands::decompose(input.as_deref())?, output),
        Command::Analyze { inputs, output } => (batch(&inputs, commands::analyze)?, output),
        Command::Decide { inputs, output } => (batch(&inputs, |p| commands::decide(p, opts))?, output),
        Command::Synthesize { input, output, verdict } => {
            let (out, verdict_doc) = commands::synthesize(input.as_deref(), opts)?;
            if let Some(v) = verdict {
                io::write_json(Some(&v), &verdict_doc, indent)?;
            }
            (out, output)
        }
        Command::Verify { instance, code, output } => (commands::verify(&instance, code.as_deref())?, output),
        Command::Gen { kind, params, output } => (commands::gen(kind, cli.seed, params)?, output),
        Command::Oracle { input, primes, max_coding, budget, agreement, output } => {
            let config = OracleConfig { max_coding, budget };
            let out = match agreement {
                Some(n) => commands::agreement(n, cli.seed, &primes, config, opts)?,
                None => commands::oracle(input.as_deref(), &primes, config)?,
            };
            (out, output)
        }
    };
    io::write_json(path.as_deref(), &out.doc, indent)?;
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_status(&e))
        }
    }
}
