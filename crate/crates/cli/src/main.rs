//! `frobcoh`: batch driver for the cohomology engine.
//!
//! Every job prints a short summary on standard output and can write a
//! schema-versioned JSON artifact (`--out`) and, where it makes sense, a
//! CSV Poincaré series (`--csv`). Exit codes: 0 success, 2 budget
//! exceeded, 3 invalid job specification, 4 internal invariant violated.

mod jobs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobcoh::{Budget, Error};

#[derive(Parser, Debug)]
#[command(
    name = "frobcoh",
    version,
    about = "Cohomology of Frobenius kernels over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of H^n(G_r, M) for n up to the window.
    Cohomology(JobArgs),
    /// Cup-product table of H^*(G_r, A) for a coefficient algebra A.
    Ring(JobArgs),
    /// Hochschild–Serre spectral sequence for G_r over its kernel G_s.
    HsSs(JobArgs),
    /// The Witt-vector class of (GL_n)_1 and its restriction along exp_α.
    Witt(JobArgs),
    /// Bar construction of k[x]/x^n: homology and bialgebra identities.
    BarCheck(JobArgs),
    /// Finite-generation and finiteness probes within the window.
    Probes(JobArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Ga,
    Gl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Trivial,
    Regular,
    GlAdjoint,
    GammaM,
    SymM,
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// The prime.
    #[arg(long)]
    pub p: u32,
    #[arg(long, value_enum, default_value = "ga")]
    pub family: FamilyArg,
    /// Matrix size for GL_n (also the truncation x^n for bar-check).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Height of the Frobenius kernel.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long = "coeff", value_enum, default_value = "trivial")]
    pub coeff: CoeffArg,
    /// Degree m of the gamma-m and sym-m coefficients.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Internal degree of the generator x (bar-check).
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    /// Largest cohomological degree (or bar internal degree) computed.
    #[arg(long, default_value_t = 6)]
    pub window: usize,
    /// Height s of the normal subgroup G_s (hs-ss) or of the restriction
    /// target (probes); defaults to r - 1.
    #[arg(long)]
    pub normal: Option<u32>,
    /// Write the JSON artifact here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a CSV Poincaré series here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Include cocycle representatives in the cohomology artifact.
    #[arg(long)]
    pub cocycles: bool,
    /// Maximum stored nonzeros per matrix.
    #[arg(long, env = "FROBCOH_MAX_NONZEROS")]
    pub budget: Option<u64>,
    /// Maximum dimension of a single cochain space.
    #[arg(long, env = "FROBCOH_MAX_COCHAIN_DIM")]
    pub max_cochain_dim: Option<u64>,
    /// Maximum dimension of a constructed Hopf algebra.
    #[arg(long, env = "FROBCOH_MAX_HOPF_DIM")]
    pub max_hopf_dim: Option<u64>,
}

impl JobArgs {
    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(v) = self.budget {
            b.max_nonzeros = v;
        }
        if let Some(v) = self.max_cochain_dim {
            b.max_cochain_dim = v;
        }
        if let Some(v) = self.max_hopf_dim {
            b.max_hopf_dim = v;
        }
        b
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 2,
        Error::Invariant(_) | Error::NotContained { .. } => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cohomology(a) => jobs::cohomology(a),
        Command::Ring(a) => jobs::ring(a),
        Command::HsSs(a) => jobs::hs_ss(a),
        Command::Witt(a) => jobs::witt(a),
        Command::BarCheck(a) => jobs::bar_check(a),
        Command::Probes(a) => jobs::probes(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(jobs::JobError::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(jobs::JobError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
