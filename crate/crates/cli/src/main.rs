//! `bnl`: verification suites, indicator evaluation and Γ sweeps for the
//! two-mode `G` operators.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::source::StateArgs;

#[derive(Debug, Parser)]
#[command(name = "bnl", version, about = "Pauli-like bosonic operators: algebra checks and nonclassicality indicators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check commutation, anticommutation, product identities and spectra.
    VerifyAlgebra {
        #[arg(long, default_value_t = 6)]
        cutoff: usize,
        #[command(flatten)]
        out: OutArgs,
        /// Test hook: corrupt one operator entry before verifying.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Peres-Mermin value against the noncontextual bound 4 (CSV by default).
    Contextuality {
        source: SourceKind,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Witness, necessary-and-sufficient family or Gram certificate.
    Entanglement {
        test: EntanglementTest,
        source: SourceKind,
        #[command(flatten)]
        state: StateArgs,
        /// Witness to evaluate; defaults to `bghz` for three beams and `singlet` for two.
        #[arg(long)]
        witness: Option<WitnessKind>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Three-party Mermin inequality with the dichotomic observables.
    Bell {
        source: SourceKind,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rotated-mode comparison: `G` operators are not covariant, Stokes operators are.
    Counterexample {
        /// Use `a_D = (a_H - b_V)/√2` instead of `(a_H + b_V)/√2`.
        #[arg(long)]
        sign_flip: bool,
        /// Photon-number block to compare on.
        #[arg(long, default_value_t = 2)]
        block: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    /// 2×2 bright squeezed vacuum (`--gamma`, `--cutoff`).
    Bsv,
    /// Bright GHZ from a coefficient file (`--coeffs`).
    Bghz,
    /// Bright GHZ from the truncated generator exponential (qualitative only).
    Generator,
    /// Embedded qubit state (`--bell-state` or `--ghz`).
    Qubit,
    /// Seeded random product state (`--seed`, `--parties`).
    ProductState,
    /// Amplitude file (`--state`).
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntanglementTest {
    Witness,
    NsFamily,
    Gram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Bghz,
    Singlet,
    PhiPlus,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, requires_all = ["gamma_max", "steps"])]
    pub gamma_min: Option<f64>,
    #[arg(long, requires_all = ["gamma_min", "steps"])]
    pub gamma_max: Option<f64>,
    #[arg(long, requires_all = ["gamma_min", "gamma_max"])]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Input(m) => m,
        }
    }
}

impl From<bnl_core::Error> for Failure {
    fn from(e: bnl_core::Error) -> Self {
        match e {
            bnl_core::Error::Parse { .. } => Failure::Input(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::VerifyAlgebra { cutoff, out, inject_fault } => commands::verify_algebra(cutoff, inject_fault, &out),
        Command::Contextuality { source, state, sweep, out } => commands::contextuality(source, &state, &sweep, &out),
        Command::Entanglement { test, source, state, witness, out } => {
            commands::entanglement(test, source, &state, witness, &out)
        }
        Command::Bell { source, state, sweep, out } => commands::bell(source, &state, &sweep, &out),
        Command::Counterexample { sign_flip, block, out } => commands::counterexample(sign_flip, block, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
