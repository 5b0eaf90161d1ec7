//! Two-mode bosonic Pauli-like operators `G₀ … G₃` on truncated Fock spaces,
//! and the contextuality, entanglement and Bell indicators built from them.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! bottom of this file fix the scalar to `f64`.

pub mod error;
pub mod fock;
pub mod gpauli;
pub mod indicators;
pub mod io;
pub mod linalg;
pub mod modes;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use fock::{expectation, BeamSpace, ComplexOperator, Domain, Expectation, ModeOccupation, MultiBeamState};
pub use gpauli::{g, g_minus, g_operator, verify_algebra, AlgebraReport, GLabel, GSet};
pub use indicators::{Verdict, VerdictRecord};
pub use linalg::DenseMatrix;
pub use modes::{conjugate, counterexample_report, fock_lift, CounterexampleReport, ModeUnitary};
pub use scalar::{Real, C};
pub use states::{bghz_state, bsv_state, prob_diagonal, BghzCoefficients, BsvParams, EnsembleState};

pub type Complex64 = num_complex::Complex<f64>;
pub type Operator = ComplexOperator<f64>;
pub type State = MultiBeamState<f64>;
pub type Ensemble = EnsembleState<f64>;
pub type Matrix = DenseMatrix<f64>;
pub type Coefficients = BghzCoefficients<f64>;
pub type Square = indicators::peres_mermin::PeresMerminSquare<f64>;
pub type Witness = indicators::witness::WitnessSpec<f64>;
pub type Certificate = indicators::gram::GramCertificate<f64>;
pub type Unitary = ModeUnitary<f64>;
