//! Gram-matrix certificate linking beam expectations to a qubit density matrix.
//!
//! With `V = (S_R, P_R)` on each beam, `|Φ_l⟩ = V_{l₁}¹ ⋯ V_{l_n}ⁿ |φ⟩` for
//! `l ∈ {0,1}ⁿ`, and `M[l][k] = ⟨Φ_k|Φ_l⟩`. Then
//! `⟨G_{s₁}¹ ⋯ G_{s_n}ⁿ⟩_φ = Tr[(σ_{s₁} ⊗ ⋯ ⊗ σ_{s_n}) M]` and
//! `Tr M = ⟨G₀ ⋯ G₀⟩_φ`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{ComplexOperator, MultiBeamState};
use crate::gpauli::{p_r, s_r};
use crate::indicators::witness::WitnessSpec;
use crate::linalg::DenseMatrix;
use crate::scalar::Real;
use crate::states::EnsembleState;

#[derive(Debug, Clone)]
pub struct GramCertificate<T: Real> {
    /// Unnormalized `M_φ` (or `Σ p_i M_{φ_i}` for a mixture).
    pub matrix: DenseMatrix<T>,
    pub trace: T,
    /// `M / Tr M`: a valid `n`-qubit density matrix.
    pub normalized: DenseMatrix<T>,
    pub min_eigenvalue: T,
}

impl<T: Real> GramCertificate<T> {
    fn from_matrix(matrix: DenseMatrix<T>) -> Result<Self> {
        let trace = matrix.trace().re;
        if trace <= T::tol(1e-14) {
            return Err(Error::DegenerateCertificate);
        }
        let min_eigenvalue = matrix.hermitian_eigenvalues().first().copied().unwrap_or_else(T::zero);
        let normalized = matrix.scale(Complex::new(T::one() / trace, T::zero()));
        Ok(Self { matrix, trace, normalized, min_eigenvalue })
    }

    pub fn is_psd(&self, tol: T) -> bool {
        self.min_eigenvalue >= -tol
    }

    /// `Tr[W 𝓜]` for a qubit witness.
    pub fn witness_value(&self, spec: &WitnessSpec<T>) -> T {
        (&spec.qubit_matrix() * &self.normalized).trace().re
    }
}

/// The unnormalized Gram matrix `M_φ` of a pure state (any number of beams).
pub fn gram_matrix<T: Real>(state: &MultiBeamState<T>) -> DenseMatrix<T> {
    let n = state.domain().n_beams();
    let vs: Vec<[ComplexOperator<T>; 2]> = state.domain().beams().iter().map(|b| [s_r(b), p_r(b)]).collect();
    let dim = 1usize << n;
    let phis: Vec<MultiBeamState<T>> = (0..dim)
        .map(|l| {
            let factors: Vec<&ComplexOperator<T>> =
                (0..n).map(|beam| &vs[beam][(l >> (n - 1 - beam)) & 1]).collect();
            state.apply_local(&factors).expect("factors built from the state's own beams")
        })
        .collect();
    let mut m = DenseMatrix::zeros(dim, dim);
    for l in 0..dim {
        for k in 0..dim {
            m[(l, k)] = phis[k].inner(&phis[l]).expect("same domain");
        }
    }
    m
}

/// Gram certificate of a pure state.
pub fn gram_certificate<T: Real>(state: &MultiBeamState<T>) -> Result<GramCertificate<T>> {
    GramCertificate::from_matrix(gram_matrix(state))
}

/// Certificate of a mixture: `Σ p_i M_{φ_i}`, normalized by its trace.
pub fn gram_certificate_ensemble<T: Real>(ensemble: &EnsembleState<T>) -> Result<GramCertificate<T>> {
    let mut acc: Option<DenseMatrix<T>> = None;
    for (p, s) in ensemble.members() {
        let m = gram_matrix(s).scale(Complex::new(*p, T::zero()));
        acc = Some(match acc {
            None => m,
            Some(a) => &a + &m,
        });
    }
    let m = acc.ok_or_else(|| Error::InvalidInput("empty ensemble".into()))?;
    if m.as_slice().iter().all(|z| z.is_zero()) {
        return Err(Error::DegenerateCertificate);
    }
    GramCertificate::from_matrix(m)
}
