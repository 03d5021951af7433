use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod source;

use commands::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "skcc", version, about = "Secret-key capacity and communication complexity of multiterminal sources")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel sweeps (output does not depend on it).
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pin,
    Pmf,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Source file (`.hg` hypergraph or `.pmf` table).
    file: Option<PathBuf>,

    /// Generate the source instead, e.g. `complete-uniform:m=5,t=3`.
    #[arg(long, value_name = "SPEC", conflicts_with = "file")]
    gen: Option<String>,

    /// File format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Secret-key capacity, omniscience rate and minimizing partitions.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        /// Also solve the linear program and report an optimal fractional partition.
        #[arg(long)]
        lp: bool,
        /// Report at most N minimizing partitions.
        #[arg(long, value_name = "N", default_value_t = skcc::capacity::DEFAULT_MINIMIZER_LIMIT)]
        limit_minimizers: usize,
        /// Report every minimizing partition.
        #[arg(long, conflicts_with = "limit_minimizers")]
        all_minimizers: bool,
        /// Lift the partition-enumeration cap.
        #[arg(long)]
        uncapped: bool,
    },
    /// Whether the singleton partition minimizes Δ, and whether uniquely.
    Typecheck {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// R_SK of a Type-S uniform hypergraph PIN model.
    Rsk {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Capacity by linear programming, with the check of the uniform fractional partition.
    Lp {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Conditional capacity given one observation of a function L of the source.
    Conditional {
        #[command(flatten)]
        source: SourceArgs,
        /// `identity`, `constant`, `edges:1,3`, `terminals:1,2` or `random:K`.
        #[arg(long, value_name = "SPEC", default_value = "constant")]
        observable: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Capacities of two sources and of their coordinatewise pairing.
    Club {
        /// Source files; `--gen` specs fill the remaining slots.
        files: Vec<PathBuf>,
        #[arg(long = "gen", value_name = "SPEC")]
        gens: Vec<String>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Run the allocation procedure on K_{m,t} and check its claims.
    Alloc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        /// Print every allocation.
        #[arg(long)]
        trace: bool,
        /// Print the availability table after every allocation.
        #[arg(long)]
        tables: bool,
    },
    /// Check Σ_i I(X_i; L) <= t·H(L) for random functions L.
    Lemma2 {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check the identity, a constant and every single-edge projection.
        #[arg(long)]
        structured: bool,
    },
    /// Write a named instance in its file format.
    Gen {
        /// e.g. `complete-uniform:m=5,t=3`, `example1:m=3,p=0.5`, `harary:m=6,k=3`.
        spec: String,
        /// Output path (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Report, Failure> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::Input(format!("cannot configure {k} threads: {e}")))?;
    }
    match cli.command {
        Command::Analyze { source, lp, limit_minimizers, all_minimizers, uncapped } => {
            let limit = (!all_minimizers).then_some(limit_minimizers);
            commands::analyze(&source, lp, limit, uncapped)
        }
        Command::Typecheck { source } => commands::typecheck(&source),
        Command::Rsk { source } => commands::rsk(&source),
        Command::Lp { source } => commands::lp(&source),
        Command::Conditional { source, observable, seed } => commands::conditional(&source, &observable, seed),
        Command::Club { files, gens, kind } => commands::club(&files, &gens, kind),
        Command::Alloc { m, t, trace, tables } => commands::alloc(m, t, trace, tables),
        Command::Lemma2 { source, trials, seed, structured } => commands::lemma2(&source, trials, seed, structured),
        Command::Gen { spec, output } => commands::gen(&spec, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            let body = if json {
                serde_json::to_string_pretty(&report.json).expect("JSON values serialize") + "\n"
            } else {
                report.text
            };
            let mut out = std::io::stdout().lock();
            if out.write_all(body.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            if let Some(msg) = &report.failure {
                eprintln!("error: {msg}");
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
