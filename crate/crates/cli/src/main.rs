mod commands;
mod demo;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tpir_core::{FieldModulus, SchemeParams};

/// Robust T-private information retrieval toolkit.
#[derive(Debug, Parser)]
#[command(name = "tpir", version)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    /// One JSON object per line.
    Records,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity as an exact fraction and the download cost per symbol.
    Capacity {
        #[arg(short = 'K', long = "messages")]
        messages: usize,
        #[arg(short = 'N', long = "responders")]
        responders: usize,
        #[arg(short = 'T', long = "colluders")]
        colluders: usize,
        /// Accepted for symmetry; capacity does not depend on it.
        #[arg(short = 'M', long = "databases")]
        databases: Option<usize>,
    },
    /// Block layout for one desired message.
    Layout {
        #[command(flatten)]
        params: ParamArgs,
        /// Desired message (1-based).
        #[arg(long, default_value_t = 1)]
        desired: usize,
    },
    /// Walk through one retrieval on a small instance.
    Demo {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        desired: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Privacy, correctness and rate checks; exits 1 if any fails.
    Audit(AuditArgs),
    /// Run a retrieval against simulated databases.
    Simulate(SimulateArgs),
    /// Per-phase timings over a parameter grid.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ParamArgs {
    #[arg(short = 'K', long = "messages")]
    pub messages: usize,
    #[arg(short = 'N', long = "responders")]
    pub responders: usize,
    #[arg(short = 'T', long = "colluders")]
    pub colluders: usize,
    /// Databases; defaults to N.
    #[arg(short = 'M', long = "databases")]
    pub databases: Option<usize>,
    /// Field size override; must be prime and fit the longest code.
    #[arg(long = "q")]
    pub modulus: Option<u64>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<SchemeParams, String> {
        let m = self.databases.unwrap_or(self.responders);
        let p = SchemeParams::new(self.messages, self.responders, self.colluders, m).map_err(|e| e.to_string())?;
        match self.modulus {
            Some(q) => {
                let q = FieldModulus::new(q).map_err(|e| e.to_string())?;
                p.with_modulus(q).map_err(|e| e.to_string())
            }
            None => Ok(p),
        }
    }
}

#[derive(Debug, Args, Clone, Copy)]
pub struct SeedArg {
    /// RNG seed; a random one is generated and printed if absent.
    #[arg(long, env = "TPIR_SEED")]
    pub seed: Option<u64>,
}

impl SeedArg {
    pub fn resolve(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let s = rand::random();
            eprintln!("seed: {s}");
            s
        })
    }
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(short = 'K', long = "messages", requires_all = ["responders", "colluders"])]
    pub messages: Option<usize>,
    #[arg(short = 'N', long = "responders")]
    pub responders: Option<usize>,
    #[arg(short = 'T', long = "colluders")]
    pub colluders: Option<usize>,
    #[arg(short = 'M', long = "databases")]
    pub databases: Option<usize>,
    #[arg(long = "q")]
    pub modulus: Option<u64>,
    /// Random stores per correctness sweep.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Also run the sampled privacy test with this many plans per index.
    #[arg(short = 'R', long = "samples")]
    pub samples: Option<usize>,
    /// Replace side-information coding with plain repetition (negative control).
    #[arg(long)]
    pub break_alignment: bool,
    /// Exhaustive row-mixing invariance check, e.g. `alpha=3 q=2`.
    #[arg(long = "mixing-invariance", alias = "lemma1", num_args = 1..=2, value_names = ["alpha=A", "q=Q"])]
    pub mixing_invariance: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    pub desired: usize,
    /// Silent databases, 1-based, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub drop: Vec<usize>,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Message content: `seed:<n>` or a path to K*L little-endian symbols.
    #[arg(long, default_value = "seed:0")]
    pub store: String,
    /// Reject stored symbols >= q instead of reducing them.
    #[arg(long)]
    pub strict: bool,
    /// Per-database answer delays in milliseconds; decodes the first N to arrive.
    #[arg(long, value_delimiter = ',')]
    pub latency_ms: Vec<u64>,
    /// Append a session record here.
    #[arg(long, env = "TPIR_LOG_DIR")]
    pub log_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    pub max_messages: usize,
    #[arg(long, default_value_t = 4)]
    pub max_responders: usize,
    /// Stores answered and decoded per grid point.
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArg,
}

/// Outcome of a subcommand, mapped to the process exit status.
pub enum Outcome {
    Ok,
    CheckFailed,
}

pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = CliConfig::parse();
    match commands::dispatch(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `tpir --help` for usage.");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
