//! Turning a source name plus flags into a state.

use std::path::PathBuf;

use bnl_core::states::{
    bghz_generator_state, bghz_state, bsv_state, qubit_embed, random_separable, DEFAULT_MAX_DENSE_DIM,
};
use bnl_core::{BsvParams, Coefficients, State};
use clap::{Args, ValueEnum};
use num_complex::Complex64;

use crate::{Failure, SourceKind};

pub const MAX_DIM_ENV: &str = "BNL_MAX_DIM";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BellState {
    Singlet,
    #[value(name = "phi+")]
    PhiPlus,
    #[value(name = "phi-")]
    PhiMinus,
    #[value(name = "psi+")]
    PsiPlus,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Amplification gain Γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Per-beam photon cutoff (source-specific default).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// BGHZ coefficient file: lines `m,real,imag`.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Amplitude file: lines `n_a1,n_b1,n_a2,n_b2[,n_a3,n_b3],real,imag`.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "singlet")]
    pub bell_state: BellState,
    /// Embed the three-qubit GHZ state instead of a two-qubit Bell state.
    #[arg(long)]
    pub ghz: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Beams of the random product state (default: 3 for `bell`, otherwise 2).
    #[arg(long)]
    pub parties: Option<usize>,
    /// Relative sign of the b-triple term in the generator.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub relative_sign: f64,
}

/// A built state plus notes that belong in the output.
pub struct Built {
    pub state: State,
    pub label: String,
    pub non_authoritative: bool,
}

fn bell_amplitudes(which: BellState) -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (z, p, m) = (Complex64::new(0.0, 0.0), Complex64::new(h, 0.0), Complex64::new(-h, 0.0));
    match which {
        BellState::Singlet => vec![z, p, m, z],
        BellState::PsiPlus => vec![z, p, p, z],
        BellState::PhiPlus => vec![p, z, z, p],
        BellState::PhiMinus => vec![p, z, z, m],
    }
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_DIM_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_DENSE_DIM),
    }
}

impl StateArgs {
    pub fn build(&self, kind: SourceKind, default_parties: usize) -> Result<Built, Failure> {
        self.build_at(kind, self.gamma, default_parties)
    }

    /// Builds the state with `gamma` overriding `--gamma` (used by sweeps).
    pub fn build_at(&self, kind: SourceKind, gamma: f64, default_parties: usize) -> Result<Built, Failure> {
        let plain = |state: State, label: String| Built { state, label, non_authoritative: false };
        Ok(match kind {
            SourceKind::Bsv => {
                let cutoff = self.cutoff.unwrap_or(40);
                plain(bsv_state(BsvParams { gamma, cutoff })?, format!("bsv gamma={gamma} cutoff={cutoff}"))
            }
            SourceKind::Bghz => {
                let path = self.coeffs.as_ref().ok_or_else(|| Failure::Usage("bghz source needs --coeffs <file>".into()))?;
                let coeffs = Coefficients::from_file(path).map_err(|e| match e {
                    bnl_core::Error::Parse { .. } => Failure::Input(format!("{}: {e}", path.display())),
                    other => Failure::Input(other.to_string()),
                })?;
                let cutoff = self.cutoff.unwrap_or(coeffs.max_photons());
                plain(bghz_state(&coeffs, cutoff)?, format!("bghz {} cutoff={cutoff}", path.display()))
            }
            SourceKind::Generator => {
                let cutoff = self.cutoff.unwrap_or(12);
                let state = bghz_generator_state(gamma, cutoff, self.relative_sign, max_dim()?)?;
                Built {
                    state,
                    label: format!("generator gamma={gamma} cutoff={cutoff} sign={}", self.relative_sign),
                    non_authoritative: true,
                }
            }
            SourceKind::Qubit => {
                if self.ghz {
                    let h = std::f64::consts::FRAC_1_SQRT_2;
                    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
                    amps[0] = Complex64::new(h, 0.0);
                    amps[7] = Complex64::new(h, 0.0);
                    plain(qubit_embed(&amps)?, "qubit ghz".into())
                } else {
                    let name = self.bell_state.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
                    plain(qubit_embed(&bell_amplitudes(self.bell_state))?, format!("qubit {name}"))
                }
            }
            SourceKind::ProductState => {
                let parties = self.parties.unwrap_or(default_parties);
                let cutoff = self.cutoff.unwrap_or(3);
                let state = random_separable(self.seed, parties, cutoff, cutoff)?;
                plain(state, format!("product-state seed={} parties={parties} cutoff={cutoff}", self.seed))
            }
            SourceKind::File => {
                let path = self.state.as_ref().ok_or_else(|| Failure::Usage("file source needs --state <file>".into()))?;
                let loaded = bnl_core::io::load_amplitudes::<f64>(path, self.cutoff).map_err(|e| match e {
                    bnl_core::Error::Parse { .. } => Failure::Input(format!("{}: {e}", path.display())),
                    bnl_core::Error::InvalidInput(m) if m.starts_with("cannot read") => Failure::Input(m),
                    other => Failure::Usage(other.to_string()),
                })?;
                if let Some(w) = &loaded.warning {
                    eprintln!("warning: {}: {w}", path.display());
                }
                plain(loaded.state, format!("file {}", path.display()))
            }
        })
    }
}
