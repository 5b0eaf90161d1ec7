//! The Pauli-like two-mode operators `G₀ … G₃`, their dichotomic variants
//! `G_{i−}`, the helper maps `S_R`/`P_R`, and the standard Stokes operators.
//!
//! On a beam with occupations `|n, m⟩`:
//!
//! * `G₀ = 1 − Σ |n,n⟩⟨n,n|`
//! * `G₁ = Σ_{n≠m} |n,m⟩⟨m,n|` (mode swap off the diagonal)
//! * `G₂ = −i · sign(N_a − N_b) · G₁`
//! * `G₃ = sign(N_a − N_b)` with `sign(0) = 0`
//!
//! Every `G_i` conserves the beam's total photon number, so truncating at a
//! cutoff introduces no error in any operator identity.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BeamSpace, ComplexOperator, Domain, ModeOccupation};
use crate::linalg::{pauli, DenseMatrix};
use crate::scalar::{re, Real, C};

/// Selects `G_i` or, with `minus_variant`, the dichotomic `G_{i−}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GLabel {
    index: u8,
    minus_variant: bool,
}

impl GLabel {
    pub fn new(index: u8, minus_variant: bool) -> Result<Self> {
        if index > 3 {
            return Err(Error::InvalidLabel(format!("G index {index} outside 0..=3")));
        }
        if index == 0 && minus_variant {
            return Err(Error::InvalidLabel("G0 has no dichotomic variant".into()));
        }
        Ok(Self { index, minus_variant })
    }

    pub fn plain(index: u8) -> Result<Self> {
        Self::new(index, false)
    }

    pub fn minus(index: u8) -> Result<Self> {
        Self::new(index, true)
    }

    #[inline]
    pub fn index(self) -> u8 {
        self.index
    }

    #[inline]
    pub fn is_minus(self) -> bool {
        self.minus_variant
    }
}

impl std::fmt::Display for GLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G{}{}", self.index, if self.minus_variant { "-" } else { "" })
    }
}

fn sign<T: Real>(occ: ModeOccupation) -> T {
    match occ.n_a.cmp(&occ.n_b) {
        std::cmp::Ordering::Greater => T::one(),
        std::cmp::Ordering::Less => -T::one(),
        std::cmp::Ordering::Equal => T::zero(),
    }
}

fn build<T: Real>(
    space: &BeamSpace,
    entry: impl Fn(ModeOccupation) -> Option<(ModeOccupation, C<T>)>,
) -> ComplexOperator<T> {
    let triplets = space.basis().iter().enumerate().filter_map(|(col, &occ)| {
        let (target, v) = entry(occ)?;
        Some((space.index_of(target).expect("target in same shell"), col, v))
    });
    ComplexOperator::from_triplets(Domain::single(space.clone()), triplets).expect("indices in range")
}

fn projector_diagonal<T: Real>(space: &BeamSpace) -> ComplexOperator<T> {
    let sp = space.clone();
    ComplexOperator::diagonal(Domain::single(space.clone()), move |i| {
        if sp.occupation(i).is_diagonal() {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// `G_i` (or `G_{i−}`) from the occupation-basis definition.
pub fn g_operator<T: Real>(label: GLabel, space: &BeamSpace) -> ComplexOperator<T> {
    let base = match label.index {
        0 => build(space, |o| (!o.is_diagonal()).then(|| (o, C::one()))),
        1 => build(space, |o| (!o.is_diagonal()).then(|| (o.swapped(), C::one()))),
        // −i · sign evaluated on the swapped ket
        2 => build(space, |o| {
            (!o.is_diagonal()).then(|| (o.swapped(), Complex::new(T::zero(), -sign::<T>(o.swapped()))))
        }),
        3 => build(space, |o| (!o.is_diagonal()).then(|| (o, re(sign::<T>(o))))),
        _ => unreachable!("GLabel validated at construction"),
    };
    let op = if label.minus_variant {
        base.sub(&projector_diagonal(space)).expect("same domain")
    } else {
        base
    };
    op.into_hermitian().expect("G operators are Hermitian by construction")
}

/// Shorthand for `g_operator(GLabel::plain(i))`.
pub fn g<T: Real>(index: u8, space: &BeamSpace) -> ComplexOperator<T> {
    g_operator(GLabel::plain(index).expect("index in 0..=3"), space)
}

/// Dichotomic `G_{i−} = G_i − Σ|n,n⟩⟨n,n|` for `i ∈ {1,2,3}`.
pub fn g_minus<T: Real>(index: u8, space: &BeamSpace) -> Result<ComplexOperator<T>> {
    if index == 0 {
        return Err(Error::InvalidLabel("G0 has no dichotomic variant".into()));
    }
    Ok(g_operator(GLabel::minus(index)?, space))
}

/// `P_R = Σ_{m>n} |n,m⟩⟨n,m|`: projector onto kets with more photons in mode `b`.
pub fn p_r<T: Real>(space: &BeamSpace) -> ComplexOperator<T> {
    build(space, |o| (o.n_b > o.n_a).then(|| (o, C::one())))
}

/// `S_R = Σ_{m>n} |n,m⟩⟨m,n|`: maps kets with more photons in mode `a` onto their swap.
pub fn s_r<T: Real>(space: &BeamSpace) -> ComplexOperator<T> {
    build(space, |o| (o.n_a > o.n_b).then(|| (o.swapped(), C::one())))
}

/// `G_i = V† σ_i V` with `V = (S_R, P_R)ᵀ`.
pub fn g_operator_compact<T: Real>(index: u8, space: &BeamSpace) -> Result<ComplexOperator<T>> {
    if index > 3 {
        return Err(Error::InvalidLabel(format!("G index {index} outside 0..=3")));
    }
    let v = [s_r::<T>(space), p_r::<T>(space)];
    let sigma = pauli::<T>(index as usize);
    let mut acc = ComplexOperator::zero(Domain::single(space.clone()));
    for k in 0..2 {
        for l in 0..2 {
            let w = sigma[(k, l)];
            if w.is_zero() {
                continue;
            }
            acc = acc.add(&v[k].adjoint().matmul(&v[l])?.scale(w))?;
        }
    }
    acc.into_hermitian()
}

fn bilinear<T: Real>(space: &BeamSpace, k: usize, l: usize) -> ComplexOperator<T> {
    // A_k† A_l with A = (a, b)
    build(space, |o| {
        let (na, nb) = (o.n_a, o.n_b);
        let (target, amp) = match (k, l) {
            (0, 0) => (o, T::from_usize(na)),
            (1, 1) => (o, T::from_usize(nb)),
            (0, 1) if nb > 0 => (ModeOccupation::new(na + 1, nb - 1), T::from_usize((na + 1) * nb).sqrt()),
            (1, 0) if na > 0 => (ModeOccupation::new(na - 1, nb + 1), T::from_usize(na * (nb + 1)).sqrt()),
            _ => return None,
        };
        (!amp.is_zero()).then(|| (target, re(amp)))
    })
}

/// Standard Stokes operator `S_i = ½ A† σ_i A`, `A† = (a†, b†)`.
pub fn stokes_operator<T: Real>(index: u8, space: &BeamSpace) -> Result<ComplexOperator<T>> {
    if index > 3 {
        return Err(Error::InvalidLabel(format!("Stokes index {index} outside 0..=3")));
    }
    let sigma = pauli::<T>(index as usize);
    let half = re(T::lit(0.5));
    let mut acc = ComplexOperator::zero(Domain::single(space.clone()));
    for k in 0..2 {
        for l in 0..2 {
            let w = sigma[(k, l)];
            if !w.is_zero() {
                acc = acc.add(&bilinear::<T>(space, k, l).scale(w * half))?;
            }
        }
    }
    acc.into_hermitian()
}

/// The four operators `G₀ … G₃` on one beam.
#[derive(Debug, Clone)]
pub struct GSet<T: Real> {
    pub ops: [ComplexOperator<T>; 4],
}

impl<T: Real> GSet<T> {
    pub fn direct(space: &BeamSpace) -> Self {
        Self { ops: [0u8, 1, 2, 3].map(|i| g(i, space)) }
    }

    pub fn compact(space: &BeamSpace) -> Self {
        Self { ops: [0u8, 1, 2, 3].map(|i| g_operator_compact(i, space).expect("index in range")) }
    }

    pub fn domain(&self) -> &Domain {
        self.ops[0].domain()
    }

    /// Largest entrywise difference to another set.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.ops.iter().zip(&other.ops).fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(b)))
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// One line of the residual table.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RelationResidual {
    pub relation: String,
    pub residual: f64,
}

/// Residuals of the operator identities and spectrum checks on one truncated beam.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AlgebraReport {
    pub cutoff: usize,
    pub max_commutator_residual: f64,
    pub max_anticommutator_residual: f64,
    pub max_product_residual: f64,
    /// `[G₀,G_i] = 0`, `G_i² = G₀`, `G₀G_i = G_i`, `G₂ = −iG₃G₁`, Hermiticity.
    pub max_identity_residual: f64,
    /// Largest distance of any `G_i` eigenvalue from `{−1, 0, +1}`.
    pub max_spectrum_deviation: f64,
    pub spectrum_ok: bool,
    /// Largest distance of any `G_{i−}` eigenvalue from `{−1, +1}`, and `‖G_{i−}² − 1‖`.
    pub max_dichotomic_residual: f64,
    pub details: Vec<RelationResidual>,
}

impl AlgebraReport {
    /// Identity residuals below `1e-12` and the spectrum within `1e-10`.
    pub fn passed(&self) -> bool {
        const IDENTITY_TOL: f64 = 1e-12;
        self.max_commutator_residual < IDENTITY_TOL
            && self.max_anticommutator_residual < IDENTITY_TOL
            && self.max_product_residual < IDENTITY_TOL
            && self.max_identity_residual < IDENTITY_TOL
            && self.max_dichotomic_residual < IDENTITY_TOL.max(1e-10)
            && self.spectrum_ok
    }
}

/// Runs the full identity and spectrum suite on the directly constructed operators.
pub fn verify_algebra<T: Real>(space: &BeamSpace) -> AlgebraReport {
    verify_algebra_set(&GSet::<T>::direct(space), space)
}

/// Runs the suite on an arbitrary operator set (used for cross-construction and
/// fault-injection checks).
pub fn verify_algebra_set<T: Real>(set: &GSet<T>, space: &BeamSpace) -> AlgebraReport {
    let g = &set.ops;
    let dom = set.domain().clone();
    let mut details = Vec::new();
    let mut record = |name: String, r: T| {
        let r = r.as_f64();
        details.push(RelationResidual { relation: name, residual: r });
        r
    };
    let i_unit = Complex::new(T::zero(), T::one());
    let zero = ComplexOperator::<T>::zero(dom.clone());
    let ident = ComplexOperator::<T>::identity(dom.clone());

    let (mut comm, mut anti, mut prod, mut ident_res) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 1..4 {
        for j in 1..4 {
            let delta = if i == j { g[0].clone() } else { zero.clone() };
            let mut eps_term = zero.clone();
            for k in 1..4 {
                let e = levi_civita(i, j, k);
                if e != 0 {
                    eps_term = eps_term.add(&g[k].scale(i_unit.scale(T::lit(e as f64)))).expect("same domain");
                }
            }
            let gij = g[i].matmul(&g[j]).expect("same domain");
            let gji = g[j].matmul(&g[i]).expect("same domain");

            let p = gij.sub(&delta).and_then(|x| x.sub(&eps_term)).expect("same domain");
            prod = prod.max(record(format!("G{i}G{j} = d{i}{j} G0 + i e{i}{j}k Gk"), p.max_abs()));

            let c = gij.sub(&gji).and_then(|x| x.sub(&eps_term.scale_real(T::lit(2.0)))).expect("same domain");
            comm = comm.max(record(format!("[G{i},G{j}] = 2i e{i}{j}k Gk"), c.max_abs()));

            let a = gij.add(&gji).and_then(|x| x.sub(&delta.scale_real(T::lit(2.0)))).expect("same domain");
            anti = anti.max(record(format!("{{G{i},G{j}}} = 2 d{i}{j} G0"), a.max_abs()));
        }
    }
    for i in 1..4 {
        let c0 = g[0].commutator(&g[i]).expect("same domain");
        ident_res = ident_res.max(record(format!("[G0,G{i}] = 0"), c0.max_abs()));
        let sq = g[i].matmul(&g[i]).and_then(|x| x.sub(&g[0])).expect("same domain");
        ident_res = ident_res.max(record(format!("G{i}^2 = G0"), sq.max_abs()));
        let g0gi = g[0].matmul(&g[i]).and_then(|x| x.sub(&g[i])).expect("same domain");
        ident_res = ident_res.max(record(format!("G0 G{i} = G{i}"), g0gi.max_abs()));
    }
    let g2_alt = g[3].matmul(&g[1]).expect("same domain").scale(-i_unit);
    ident_res = ident_res.max(record("G2 = -i G3 G1".into(), g[2].max_abs_diff(&g2_alt)));
    for (i, op) in g.iter().enumerate() {
        ident_res = ident_res.max(record(format!("G{i} Hermitian"), op.max_abs_diff(&op.adjoint())));
    }

    // Spectra per photon-number shell.
    let mut spec_dev = T::zero();
    let mut dich = T::zero();
    let diag_proj = ident.sub(&g[0]).expect("same domain");
    for t in 0..=space.cutoff() {
        let block: Vec<usize> = space.block(t).collect();
        for op in g.iter() {
            for ev in op.dense_block(&block).hermitian_eigenvalues() {
                let d = [-T::one(), T::zero(), T::one()].iter().fold(T::infinity(), |m, &x| m.min((ev - x).abs()));
                spec_dev = spec_dev.max(d);
            }
        }
        for op in &g[1..] {
            let minus = op.sub(&diag_proj).expect("same domain");
            for ev in minus.dense_block(&block).hermitian_eigenvalues() {
                dich = dich.max((ev.abs() - T::one()).abs());
            }
        }
    }
    for (i, op) in g.iter().enumerate().skip(1) {
        let minus = op.sub(&diag_proj).expect("same domain");
        let sq = minus.matmul(&minus).and_then(|x| x.sub(&ident)).expect("same domain");
        dich = dich.max(T::lit(record(format!("G{i}-^2 = 1"), sq.max_abs())));
    }
    let spectrum_ok = spec_dev < T::tol(1e-10);
    let spec_dev = spec_dev.as_f64();

    AlgebraReport {
        cutoff: space.cutoff(),
        max_commutator_residual: comm,
        max_anticommutator_residual: anti,
        max_product_residual: prod,
        max_identity_residual: ident_res,
        max_spectrum_deviation: spec_dev,
        spectrum_ok,
        max_dichotomic_residual: dich.as_f64(),
        details,
    }
}

/// Restriction of `G₀ … G₃` to the one-photon shell `{|1,0⟩, |0,1⟩}` as 2×2 matrices.
pub fn pauli_restriction<T: Real>(space: &BeamSpace) -> Result<[DenseMatrix<T>; 4]> {
    if space.cutoff() < 1 {
        return Err(Error::InvalidInput("one-photon restriction needs cutoff >= 1".into()));
    }
    let block: Vec<usize> = space.block(1).collect();
    Ok([0u8, 1, 2, 3].map(|i| g::<T>(i, space).dense_block(&block)))
}
