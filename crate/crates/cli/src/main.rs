//! `knotpres`: command-line front end.
//!
//! Exit status 0 is a positive result, 1 a verified negative or
//! inconclusive one, 2 a usage, input or precondition error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "knotpres", version, about = "Balanced presentations, Andrews-Curtis certificates and dual presentations")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Presentation given as a file path or as literal text such as
/// `"< a | a^5 >"`.
#[derive(Args, Debug)]
struct PresArg {
    presentation: String,
}

#[derive(Args, Debug, Clone, Copy)]
struct LimitArgs {
    #[arg(long, default_value_t = knotpres::search::SearchLimits::default().max_depth)]
    max_depth: usize,
    /// Bound on the total letter count of a state.
    #[arg(long, default_value_t = knotpres::search::SearchLimits::default().max_total_letters)]
    max_letters: usize,
    #[arg(long, default_value_t = knotpres::search::SearchLimits::default().max_relator_letters)]
    max_relator_letters: usize,
    #[arg(long, default_value_t = knotpres::search::SearchLimits::default().max_states)]
    max_states: usize,
}

impl LimitArgs {
    fn limits(self) -> knotpres::search::SearchLimits {
        knotpres::search::SearchLimits {
            max_total_letters: self.max_letters,
            max_relator_letters: self.max_relator_letters,
            max_depth: self.max_depth,
            max_states: self.max_states,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Higman,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print a presentation in canonical text form.
    Parse(PresArg),
    /// Whether generator and relator counts agree.
    Balanced(PresArg),
    /// Exponent-sum matrix, rows = relators.
    Matrix(PresArg),
    /// Smith invariant factors of a presentation or, with --matrix, a matrix file.
    Snf {
        input: String,
        #[arg(long)]
        matrix: bool,
    },
    /// Whether the abelianization is trivial.
    Perfect(PresArg),
    /// Trivial-group presentation with a given unimodular exponent matrix.
    Lemma2 {
        matrix: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Dual presentation under the scan-order or a given witness.
    Dualize {
        presentation: String,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Aligned dual with a trivialization certificate, written as a bundle.
    Theorem3 {
        presentation: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_cosets: usize,
    },
    /// Group order by coset enumeration.
    Order {
        presentation: String,
        #[arg(long, default_value_t = knotpres::coset::DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Print the coset table.
        #[arg(long)]
        table: bool,
    },
    /// Search for a nontrivial permutation image.
    Quotient {
        presentation: String,
        #[arg(long, default_value_t = knotpres::quotient::DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Breadth-first search for an Andrews-Curtis trivialization.
    Acsearch {
        presentation: String,
        #[command(flatten)]
        limits: LimitArgs,
        /// Certificate file, or a directory to hold `acsearch.cert`.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Replay a certificate file, or check a bundle directory.
    VerifyCert { path: PathBuf },
    /// Run the example corpus and check every expectation.
    Corpus {
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, requires = "family")]
        m: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        max_cosets: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

fn main() -> ExitCode {
    // FORGE_SEED is reserved; every algorithm here is deterministic.
    let cli = Cli::parse();
    let started = Instant::now();
    let result = commands::run(cli.command);
    let elapsed = started.elapsed();
    match result {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => {
                    let out = serde_json::json!({
                        "verdict": report.verdict,
                        "data": report.data,
                        "timings": { "total_ms": elapsed.as_secs_f64() * 1000.0 },
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("json values serialize"));
                }
            }
            if report.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
