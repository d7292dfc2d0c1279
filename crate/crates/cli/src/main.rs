//! `treequiver` command-line front end.
//!
//! Every command prints a single JSON report on standard output and exits with
//! 0 (ok), 1 (invalid input) or 2 (internal failure).

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{Failure, Report, Status};

#[derive(Parser, Debug)]
#[command(
    name = "treequiver",
    version,
    about = "Decompose trees over rooted tree quivers and their H0 filtrations"
)]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Emit a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecomposeKind {
    Tree,
    Filtration,
    Bifiltration,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Quiver,
    Tree,
    Filtration,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate any input file, reporting its kind.
    Validate { path: PathBuf },
    /// Decompose a tree over Q or the H0 of a filtered graph.
    Decompose {
        path: PathBuf,
        /// Required file kind; detected from the file when absent.
        #[arg(long, value_enum)]
        kind: Option<DecomposeKind>,
    },
    /// Enumerate the reduced trees over a rooted tree quiver.
    Reduced {
        path: PathBuf,
        /// Include the reduced trees over every downset.
        #[arg(long)]
        with_downsets: bool,
    },
    /// Compare two trees over the same quiver.
    Compare { s: PathBuf, t: PathBuf },
    /// Check a decomposition against the brute-force linear-algebra oracle.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Perturb the decomposition before checking it.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Decompose the merge-tree morphism of two linear filtrations f <= g.
    MergeInvariant { path: PathBuf },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
        size: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size of the random quiver for tree and filtration instances.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        quiver_size: u64,
        /// Also write the generated file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Decompose { .. } => "decompose",
            Command::Reduced { .. } => "reduced",
            Command::Compare { .. } => "compare",
            Command::Oracle { .. } => "oracle",
            Command::MergeInvariant { .. } => "merge-invariant",
            Command::Gen { .. } => "gen",
        }
    }
}

fn dispatch(command: &Command, report: &mut Report) -> Result<serde_json::Value, Failure> {
    match command {
        Command::Validate { path } => commands::validate(path, report),
        Command::Decompose { path, kind } => commands::decompose(path, *kind, report),
        Command::Reduced { path, with_downsets } => commands::reduced(path, *with_downsets, report),
        Command::Compare { s, t } => commands::compare(s, t, report),
        Command::Oracle { path, prime, corrupt } => commands::oracle(path, *prime, *corrupt, report),
        Command::MergeInvariant { path } => commands::merge_invariant(path, report),
        Command::Gen {
            kind,
            size,
            seed,
            quiver_size,
            out,
        } => commands::gen(
            *kind,
            *size as usize,
            *seed,
            *quiver_size as usize,
            out.as_deref(),
            report,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut report = Report::new(cli.command.name(), args);

    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli.command, &mut report)));
    match outcome {
        Ok(Ok(result)) => report.finish_ok(result),
        Ok(Err(failure)) => report.finish_err(failure),
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            report.finish_err(Failure::internal("panic", message))
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    if let Some(error) = &report.error {
        eprintln!("treequiver {}: {}: {}", report.command, error.kind, error.message);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if cli.output.pretty {
        print!("{}", report.render_pretty());
    } else {
        println!("{}", report.to_json());
    }
    ExitCode::from(match report.status {
        Status::Ok => 0,
        Status::InvalidInput => 1,
        Status::Internal => 2,
    })
}
