use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: String, found: String },

    #[error("operator has {found} tensor factors but the domain declares {expected}")]
    FactorCount { expected: usize, found: usize },

    #[error("operator flagged Hermitian yields imaginary expectation part {imag:e}")]
    HermitianViolation { imag: f64 },

    #[error("operator is not Hermitian: max |A - A^dagger| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("state is not normalized: |psi|^2 + deficit = {total}")]
    NotNormalized { total: f64 },

    #[error("invalid operator label: {0}")]
    InvalidLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state lies entirely in the diagonal subspace; Gram certificate is degenerate (trace 0)")]
    DegenerateCertificate,

    #[error("all coefficients are zero")]
    ZeroCoefficients,

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionExceeded { dim: usize, max: usize },

    #[error("matrix is not unitary: max |U^dagger U - 1| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
