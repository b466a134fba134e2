//! `condent`: channel construction, entropy and rate evaluation, and the
//! experiment runners.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 solver failure,
//! 3 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Directory used for experiment outputs when `--out` is not given.
pub const OUT_DIR_ENV: &str = "CONDENT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "condent", version, about = "Conditional entropies and resource rates of bipartite quantum channels")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Numerical tolerance, in [1e-12, 1e-2]; each command has its own default.
    #[arg(long, global = true, value_parser = parse_tolerance)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Iteration cap for each local input-state search.
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: u64,
    /// Random starts for input-state searches.
    #[arg(long, global = true, default_value_t = 16)]
    pub starts: usize,
    /// How a channel smoothing radius maps onto the Choi state.
    #[arg(long, global = true, value_enum, default_value_t = Smoothing::FullBall)]
    pub smoothing: Smoothing,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    HalfBall,
    FullBall,
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (1e-12..=1e-2).contains(&t) {
        Ok(t)
    } else {
        Err(format!("tolerance {t} outside [1e-12, 1e-2]"))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or check channel files.
    Channel {
        #[command(subcommand)]
        action: ChannelAction,
    },
    /// Evaluate a channel entropy.
    Entropy(EntropyArgs),
    /// One-shot athermality cost or yield.
    Rate(RateArgs),
    /// Run a figure reproduction or the verification suite.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChannelAction {
    Make(MakeArgs),
    /// Print CPTP residuals and structural predicates.
    Validate { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Unitary,
    Controlled,
    Swap,
    Replacer,
    Thermal,
    WeylMix,
    Noisy,
    Random,
    Tensor,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Identity,
    Cnot,
    Haar,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Target shifted by the control value.
    Shift,
    /// Qubit target with the four Pauli operators.
    Pauli,
}

#[derive(Args, Debug)]
pub struct MakeArgs {
    pub kind: Kind,
    /// `d` (swap, weyl-mix), `dA,dB` or `dA',dB',dA,dB`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Gate::Haar)]
    pub gate: Gate,
    #[arg(long, value_enum, default_value_t = Family::Shift)]
    pub family: Family,
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Second factor for `tensor`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// White-noise weight for `noisy`.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Diagonal Hamiltonian for `thermal`.
    #[arg(long, value_delimiter = ',')]
    pub energies: Vec<f64>,
    /// Stinespring environment dimension for `random`.
    #[arg(long, default_value_t = 4)]
    pub env: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Smin,
    SminDownUp,
    Ns,
    VnTelecov,
    Hyp,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Quantity::Smin)]
    pub quantity: Quantity,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Also write the result as an experiment CSV row.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateWhich {
    Cost,
    Yield,
}

#[derive(Args, Debug)]
pub struct RateArgs {
    pub which: RateWhich,
    pub file: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Use H = 0 on A.
    #[arg(long, conflicts_with = "energies")]
    pub trivial_h: bool,
    /// Diagonal Hamiltonian on A.
    #[arg(long, value_delimiter = ',')]
    pub energies: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCmd {
    /// Noisy CNOT, SWAP and id families on a p grid.
    Fig2 {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 21)]
        grid_points: usize,
    },
    /// Noisy seeded random channels.
    RandomFig {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 21)]
        grid_points: usize,
    },
    /// The theorem-verification suite; exits 3 if any check fails.
    Verify {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        no_aep: bool,
        /// Adds a non-CPTP channel as a negative control.
        #[arg(long)]
        inject_faulty: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command, &cli.config) {
        Ok(code) => code.into(),
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code.into()
        }
    }
}
