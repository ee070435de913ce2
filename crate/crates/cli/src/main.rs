//! Command-line front end: compute distances between measure files, run the
//! randomized benchmark sweep, discretize continuous sources, and run the
//! oracle-backed self test.
//!
//! Exit codes: 0 success; 1 selftest found a failure; 2 input files failed
//! to parse (or read); 3 invalid arguments or flag combinations; 4 the
//! benchmark detected a cross-backend value mismatch.

mod approx;
mod bench;
mod dist;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub(crate) struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn failure(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

pub(crate) type CliResult = Result<(), CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum MetricArg {
    W1,
    #[value(name = "w1-normalized")]
    W1Normalized,
    #[value(name = "w1-centralized")]
    W1Centralized,
    Flat,
    #[value(name = "flat-upper")]
    FlatUpper,
    Radon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum BackendArg {
    Array,
    Tree,
}

impl From<BackendArg> for radon_metrics::Backend {
    fn from(arg: BackendArg) -> Self {
        match arg {
            BackendArg::Array => radon_metrics::Backend::Array,
            BackendArg::Tree => radon_metrics::Backend::Tree,
        }
    }
}

impl std::fmt::Display for BackendArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        radon_metrics::Backend::from(*self).fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum DistributionArg {
    Clustered,
    Spread,
}

impl DistributionArg {
    pub fn name(self) -> &'static str {
        match self {
            DistributionArg::Clustered => "clustered",
            DistributionArg::Spread => "spread",
        }
    }
}

#[derive(Parser)]
#[command(name = "radon-metrics", version, about = "Distances between discrete measures on the real line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a distance between two measure files
    Dist {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Which metric to compute
        #[arg(long)]
        metric: MetricArg,
        /// Envelope backend (flat metric only; default tree)
        #[arg(long)]
        backend: Option<BackendArg>,
        /// Print the envelope after each sweep iteration to stderr
        /// (flat metric only)
        #[arg(long)]
        trace: bool,
    },
    /// Time the flat-metric backends on random instances; CSV on stdout
    Bench {
        /// Comma-separated instance sizes; `k` and `m` suffixes are allowed
        /// (e.g. 1k,20k,1m)
        #[arg(long = "n", value_delimiter = ',', required = true)]
        sizes: Vec<String>,
        /// Timed repetitions per size
        #[arg(long, default_value_t = 1)]
        reps: u32,
        /// Instance family: positions on [-1,1] or gaps larger than 2
        #[arg(long = "dist", value_enum, default_value_t = DistributionArg::Clustered)]
        distribution: DistributionArg,
        /// Backends to time, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = [BackendArg::Array, BackendArg::Tree])]
        backend: Vec<BackendArg>,
        /// Base seed; each (size, repetition) derives its own instance seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Discretize a continuous source into a measure file
    Approx {
        /// Source spec: `uniform <a> <b> <mass>`, `step <file>` or
        /// `table <file>`
        #[arg(long)]
        source: String,
        /// Number of cells (atoms)
        #[arg(long)]
        n: u64,
        /// Output measure file
        #[arg(long)]
        out: PathBuf,
        /// Place atoms at cell midpoints instead of right endpoints
        #[arg(long)]
        midpoint: bool,
    },
    /// Check the closed forms against the brute-force oracles
    Selftest {
        /// Largest instance size the oracle is asked to verify
        #[arg(long, default_value_t = 12)]
        cap: usize,
        /// Number of random cases
        #[arg(long, default_value_t = 500)]
        cases: u64,
        /// Oracle grid step
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt one comparison to exercise the failure path
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

pub(crate) fn format_value(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        "inf".to_string()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist { file_a, file_b, metric, backend, trace } => {
            dist::run(&file_a, &file_b, metric, backend, trace)
        }
        Command::Bench { sizes, reps, distribution, backend, seed } => {
            bench::run(&sizes, reps, distribution, &backend, seed)
        }
        Command::Approx { source, n, out, midpoint } => approx::run(&source, n, &out, midpoint),
        Command::Selftest { cap, cases, h, seed, inject_fault } => {
            selftest::run(cap, cases, h, seed, inject_fault)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
