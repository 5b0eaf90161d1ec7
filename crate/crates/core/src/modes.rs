//! Mode-basis changes lifted to the truncated Fock space, and the two-photon
//! counterexample showing the `G` set is not covariant under them.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BeamSpace, ComplexOperator, Domain, ModeOccupation};
use crate::gpauli::{g, stokes_operator};
use crate::linalg::{DenseMatrix, MatrixReport};
use crate::scalar::{Real, C};

/// A 2×2 unitary acting on the mode pair `(a, b)` of one beam.
///
/// The lift satisfies `U a_k† U† = Σ_j u[j][k] a_j†`: column `k` holds the
/// new mode `k` written in the old modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeUnitary<T: Real> {
    matrix: [[C<T>; 2]; 2],
}

impl<T: Real> ModeUnitary<T> {
    pub fn new(matrix: [[C<T>; 2]; 2]) -> Result<Self> {
        let u = Self { matrix };
        let prod = u.adjoint().mul(&u).matrix;
        let mut residual = T::zero();
        for (i, row) in prod.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let target = if i == j { C::one() } else { C::zero() };
                residual = residual.max((*z - target).norm());
            }
        }
        if residual > T::tol(1e-12) {
            return Err(Error::NotUnitary { residual: residual.as_f64() });
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        Self { matrix: [[C::one(), C::zero()], [C::zero(), C::one()]] }
    }

    /// 50/50 map `a_D = (a_H + b_V)/√2`, `b_A = (a_H − b_V)/√2`.
    ///
    /// With `sign_flip` the diagonal mode is `(a_H − b_V)/√2` and the
    /// anti-diagonal one `(a_H + b_V)/√2`.
    pub fn balanced(sign_flip: bool) -> Self {
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        let matrix = if sign_flip { [[h, h], [-h, h]] } else { [[h, h], [h, -h]] };
        Self { matrix }
    }

    pub fn matrix(&self) -> &[[C<T>; 2]; 2] {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.matrix;
        Self { matrix: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.matrix, &other.matrix);
        let mut out = [[C::zero(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { matrix: out }
    }
}

fn ln_factorial<T: Real>(n: usize) -> T {
    (2..=n).map(|k| T::from_usize(k).ln()).sum()
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    (ln_factorial::<T>(n) - ln_factorial::<T>(k) - ln_factorial::<T>(n - k)).exp().round()
}

/// Second-quantized lift of `u`: `|n,m⟩ ↦ (Σ_j u_{j0} a_j†)ⁿ (Σ_j u_{j1} a_j†)ᵐ |0⟩ / √(n! m!)`.
///
/// Each photon-number block is mapped into itself, so the truncation is exact.
pub fn fock_lift<T: Real>(u: &ModeUnitary<T>, space: &BeamSpace) -> ComplexOperator<T> {
    let m = u.matrix();
    let mut triplets = Vec::new();
    for (col, occ) in space.basis().iter().enumerate() {
        let (n, mm) = (occ.n_a, occ.n_b);
        let total = n + mm;
        let norm = ln_factorial::<T>(n) + ln_factorial::<T>(mm);
        for j in 0..=n {
            let first = m[0][0].powu(j as u32) * m[1][0].powu((n - j) as u32) * binomial::<T>(n, j);
            for k in 0..=mm {
                let second = m[0][1].powu(k as u32) * m[1][1].powu((mm - k) as u32) * binomial::<T>(mm, k);
                let na = j + k;
                let weight =
                    ((ln_factorial::<T>(na) + ln_factorial::<T>(total - na) - norm) * T::lit(0.5)).exp();
                let row = space.index_of(ModeOccupation::new(na, total - na)).expect("same shell");
                triplets.push((row, col, first * second * weight));
            }
        }
    }
    ComplexOperator::from_triplets(Domain::single(space.clone()), triplets).expect("indices in range")
}

/// `U_F† op U_F` with `U_F = fock_lift(u)`, for a single-beam operator.
///
/// The operator built from rotated modes `a'_k = Σ_j w[j][k] a_j` by the same
/// recipe as `op` is `conjugate(op, &w.adjoint())`.
pub fn conjugate<T: Real>(op: &ComplexOperator<T>, u: &ModeUnitary<T>) -> Result<ComplexOperator<T>> {
    let beams = op.domain().beams();
    if beams.len() != 1 {
        return Err(Error::InvalidInput(format!("mode conjugation acts on one beam, got {}", beams.len())));
    }
    let lift = fock_lift(u, &beams[0]);
    lift.adjoint().matmul(op)?.matmul(&lift)
}

/// `max_abs` distance between two matrices allowing an overall sign.
pub fn distance_up_to_sign<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> T {
    let neg = y.scale(Complex::new(-T::one(), T::zero()));
    x.max_abs_diff(y).min(x.max_abs_diff(&neg))
}

/// Expected two-photon matrix of the rotated `G₃`, in the `(|2,0⟩, |1,1⟩, |0,2⟩)` order.
pub fn expected_two_photon_g3<T: Real>() -> DenseMatrix<T> {
    let v = Complex::new(-T::FRAC_1_SQRT_2(), T::zero());
    let z = C::zero();
    DenseMatrix::from_rows(&[vec![z, v, z], vec![v, z, v], vec![z, v, z]])
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CounterexampleReport {
    pub convention: String,
    pub block: usize,
    pub basis: Vec<String>,
    /// Rotated `G₃` written in the original modes, restricted to the block.
    pub rotated_g3: MatrixReport,
    pub g1: MatrixReport,
    /// `min_± ‖rotated G₃ ∓ G₁‖_max` on the block.
    pub g_distance: f64,
    /// Same comparison for `S₃` against `S₁` on the block.
    pub stokes_distance: f64,
    /// Distance to the expected explicit matrix up to a global sign (two-photon block only).
    pub explicit_matrix_distance: Option<f64>,
    pub g_non_equivalent: bool,
    pub stokes_covariant: bool,
}

/// Rotates `G₃` and `S₃` by the balanced mode unitary and compares them with
/// `G₁` and `S₁` on the `block`-photon subspace.
pub fn counterexample_report(sign_flip: bool, block: usize) -> Result<CounterexampleReport> {
    if block == 0 {
        return Err(Error::InvalidInput("block must contain at least one photon".into()));
    }
    let space = BeamSpace::new(block);
    let u = ModeUnitary::<f64>::balanced(sign_flip).adjoint();
    let indices: Vec<usize> = space.block(block).collect();
    let restrict = |op: &ComplexOperator<f64>| op.dense_block(&indices);

    let rotated_g3 = restrict(&conjugate(&g(3, &space), &u)?);
    let g1 = restrict(&g(1, &space));
    let rotated_s3 = restrict(&conjugate(&stokes_operator(3, &space)?, &u)?);
    let s1 = restrict(&stokes_operator(1, &space)?);

    let g_distance = distance_up_to_sign(&rotated_g3, &g1);
    let stokes_distance = distance_up_to_sign(&rotated_s3, &s1);
    let explicit_matrix_distance = (block == 2).then(|| distance_up_to_sign(&rotated_g3, &expected_two_photon_g3()));
    let convention = if sign_flip {
        "a_D = (a_H - b_V)/sqrt2, b_A = (a_H + b_V)/sqrt2"
    } else {
        "a_D = (a_H + b_V)/sqrt2, b_A = (a_H - b_V)/sqrt2"
    };
    Ok(CounterexampleReport {
        convention: convention.into(),
        block,
        basis: indices.iter().map(|&i| format!("|{}>", space.occupation(i))).collect(),
        rotated_g3: rotated_g3.to_report(),
        g1: g1.to_report(),
        g_distance,
        stokes_distance,
        explicit_matrix_distance,
        g_non_equivalent: g_distance > 0.5,
        stokes_covariant: stokes_distance < 1e-12,
    })
}
