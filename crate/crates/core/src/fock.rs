//! Truncated two-mode Fock spaces, sparse complex operators and multi-beam states.
//!
//! A *beam* carries two orthogonal bosonic modes `a` and `b`. Its truncated
//! space holds every occupation `|n_a, n_b⟩` with `n_a + n_b ≤ cutoff`, in
//! the canonical order: total photon number ascending, and within one total
//! `n_a` descending (so the one-photon shell reads `|1,0⟩, |0,1⟩`).
//! Several beams are joined by tensor product with beam 0 as the most
//! significant index.

use std::fmt;
use std::ops::Range;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{Real, C};

/// Photon counts of the two modes of one beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModeOccupation {
    pub n_a: usize,
    pub n_b: usize,
}

impl ModeOccupation {
    #[inline]
    pub const fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    #[inline]
    pub const fn total(self) -> usize {
        self.n_a + self.n_b
    }

    /// Equal occupation of both modes; such kets are annihilated by every `G_i`.
    #[inline]
    pub const fn is_diagonal(self) -> bool {
        self.n_a == self.n_b
    }

    /// The occupation with the two modes exchanged.
    #[inline]
    pub const fn swapped(self) -> Self {
        Self { n_a: self.n_b, n_b: self.n_a }
    }
}

impl fmt::Display for ModeOccupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.n_a, self.n_b)
    }
}

/// Two-mode occupation basis of one beam up to a total-photon cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeamSpace {
    cutoff: usize,
    basis: Vec<ModeOccupation>,
}

impl BeamSpace {
    pub fn new(cutoff: usize) -> Self {
        let basis = (0..=cutoff)
            .flat_map(|t| (0..=t).map(move |n_b| ModeOccupation::new(t - n_b, n_b)))
            .collect();
        Self { cutoff, basis }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn basis(&self) -> &[ModeOccupation] {
        &self.basis
    }

    #[inline]
    pub fn occupation(&self, index: usize) -> ModeOccupation {
        self.basis[index]
    }

    /// Position of `occ` in the canonical basis, if it lies within the cutoff.
    #[inline]
    pub fn index_of(&self, occ: ModeOccupation) -> Option<usize> {
        let t = occ.total();
        (t <= self.cutoff).then(|| t * (t + 1) / 2 + occ.n_b)
    }

    /// Index range of the shell with `total` photons.
    pub fn block(&self, total: usize) -> Range<usize> {
        assert!(total <= self.cutoff, "shell {total} beyond cutoff {}", self.cutoff);
        let start = total * (total + 1) / 2;
        start..start + total + 1
    }
}

/// Ordered list of beams forming a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    beams: Vec<BeamSpace>,
}

impl Domain {
    pub fn new(beams: Vec<BeamSpace>) -> Self {
        Self { beams }
    }

    /// `n` beams sharing one cutoff.
    pub fn uniform(n: usize, cutoff: usize) -> Self {
        Self::new(vec![BeamSpace::new(cutoff); n])
    }

    pub fn single(space: BeamSpace) -> Self {
        Self::new(vec![space])
    }

    #[inline]
    pub fn beams(&self) -> &[BeamSpace] {
        &self.beams
    }

    #[inline]
    pub fn n_beams(&self) -> usize {
        self.beams.len()
    }

    pub fn dim(&self) -> usize {
        self.beams.iter().map(BeamSpace::dim).product()
    }

    /// Joins two domains (self first).
    pub fn join(&self, other: &Domain) -> Domain {
        let mut beams = self.beams.clone();
        beams.extend(other.beams.iter().cloned());
        Domain { beams }
    }

    /// Splits a flat index into per-beam occupations.
    pub fn decode(&self, mut index: usize) -> Vec<ModeOccupation> {
        let mut out = vec![ModeOccupation::new(0, 0); self.beams.len()];
        for (slot, beam) in out.iter_mut().zip(&self.beams).rev() {
            *slot = beam.occupation(index % beam.dim());
            index /= beam.dim();
        }
        out
    }

    /// Flat index of a per-beam occupation list, if every beam is within its cutoff.
    pub fn encode(&self, occs: &[ModeOccupation]) -> Option<usize> {
        if occs.len() != self.beams.len() {
            return None;
        }
        let mut index = 0;
        for (beam, &occ) in self.beams.iter().zip(occs) {
            index = index * beam.dim() + beam.index_of(occ)?;
        }
        Some(index)
    }

    /// Stride of beam `k` in the flat index.
    fn stride(&self, k: usize) -> usize {
        self.beams[k + 1..].iter().map(BeamSpace::dim).product()
    }

    fn describe(&self) -> String {
        let cutoffs: Vec<String> = self.beams.iter().map(|b| b.cutoff.to_string()).collect();
        format!("{} beam(s) with cutoffs [{}]", self.beams.len(), cutoffs.join(", "))
    }

    pub(crate) fn check(&self, other: &Domain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch { expected: self.describe(), found: other.describe() })
        }
    }
}

/// Sparse complex linear map on a [`Domain`], stored row-compressed.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator<T: Real> {
    domain: Domain,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C<T>>,
    hermitian: bool,
}

impl<T: Real> ComplexOperator<T> {
    /// Builds an operator from `(row, column, value)` entries; duplicates are summed
    /// and exact zeros dropped.
    pub fn from_triplets(
        domain: Domain,
        entries: impl IntoIterator<Item = (usize, usize, C<T>)>,
    ) -> Result<Self> {
        let dim = domain.dim();
        let mut items = Vec::new();
        for (r, c, v) in entries {
            if r >= dim || c >= dim {
                return Err(Error::InvalidInput(format!(
                    "entry ({r}, {c}) outside operator dimension {dim}"
                )));
            }
            items.push((r, c, v));
        }
        items.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut b = CsrBuilder::new(dim, items.len());
        let mut iter = items.into_iter().peekable();
        while let Some((r, c, mut v)) = iter.next() {
            while let Some(&(r2, c2, v2)) = iter.peek() {
                if (r2, c2) != (r, c) {
                    break;
                }
                v += v2;
                iter.next();
            }
            b.push(r, c, v);
        }
        Ok(b.finish(domain, false))
    }

    pub fn zero(domain: Domain) -> Self {
        let dim = domain.dim();
        Self { domain, row_ptr: vec![0; dim + 1], col_idx: Vec::new(), values: Vec::new(), hermitian: true }
    }

    pub fn identity(domain: Domain) -> Self {
        Self::diagonal(domain, |_| T::one())
    }

    /// Diagonal operator with real entries `f(index)`.
    pub fn diagonal(domain: Domain, f: impl Fn(usize) -> T) -> Self {
        let dim = domain.dim();
        let entries = (0..dim).map(|i| (i, i, Complex::new(f(i), T::zero())));
        let mut op = Self::from_triplets(domain, entries).expect("diagonal entries in range");
        op.hermitian = true;
        op
    }

    #[inline]
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Nonzero entries of one row as `(column, value)`.
    #[inline]
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C<T>)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// All nonzero entries as `(row, column, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C<T>)> + '_ {
        (0..self.dim()).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn entry(&self, r: usize, c: usize) -> C<T> {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => C::zero(),
        }
    }

    /// Verifies `A = A†` within `1e-14` (type-adjusted) and sets the Hermitian flag.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let residual = self.max_abs_diff(&self.adjoint());
        if residual > T::tol(1e-14) {
            return Err(Error::NotHermitian { residual: residual.as_f64() });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.entries().map(|(r, c, v)| (c, r, v.conj()));
        let mut out = Self::from_triplets(self.domain.clone(), entries).expect("transposed indices in range");
        out.hermitian = self.hermitian;
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out.hermitian = self.hermitian && s.im.is_zero();
        if s.is_zero() {
            return Self::zero(self.domain.clone());
        }
        out
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    fn combine(&self, other: &Self, sign: T) -> Result<Self> {
        self.domain.check(&other.domain)?;
        let dim = self.dim();
        let mut b = CsrBuilder::new(dim, self.nnz().max(other.nnz()));
        for r in 0..dim {
            let mut x = self.row(r).peekable();
            let mut y = other.row(r).map(|(c, v)| (c, v.scale(sign))).peekable();
            loop {
                match (x.peek().copied(), y.peek().copied()) {
                    (None, None) => break,
                    (Some((c, v)), None) => {
                        x.next();
                        b.push(r, c, v);
                    }
                    (None, Some((c, v))) => {
                        y.next();
                        b.push(r, c, v);
                    }
                    (Some((cx, vx)), Some((cy, vy))) => {
                        if cx == cy {
                            x.next();
                            y.next();
                            b.push(r, cx, vx + vy);
                        } else if cx < cy {
                            x.next();
                            b.push(r, cx, vx);
                        } else {
                            y.next();
                            b.push(r, cy, vy);
                        }
                    }
                }
            }
        }
        Ok(b.finish(self.domain.clone(), self.hermitian && other.hermitian))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -T::one())
    }

    /// Operator product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.domain.check(&other.domain)?;
        let dim = self.dim();
        let mut acc = vec![C::<T>::zero(); dim];
        let mut seen = vec![usize::MAX; dim];
        let mut touched = Vec::new();
        let mut b = CsrBuilder::new(dim, self.nnz().max(other.nnz()));
        for r in 0..dim {
            touched.clear();
            for (k, a) in self.row(r) {
                for (c, v) in other.row(k) {
                    if seen[c] != r {
                        seen[c] = r;
                        acc[c] = C::zero();
                        touched.push(c);
                    }
                    acc[c] += a * v;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                b.push(r, c, acc[c]);
            }
        }
        Ok(b.finish(self.domain.clone(), false))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.add(&other.matmul(self)?)
    }

    /// Kronecker product `self ⊗ other` on the joined domain.
    pub fn kron(&self, other: &Self) -> Self {
        let d2 = other.dim();
        let mut row_ptr = Vec::with_capacity(self.dim() * d2 + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() * other.nnz());
        let mut values = Vec::with_capacity(self.nnz() * other.nnz());
        row_ptr.push(0);
        for r1 in 0..self.dim() {
            for r2 in 0..d2 {
                for (c1, v1) in self.row(r1) {
                    for (c2, v2) in other.row(r2) {
                        col_idx.push(c1 * d2 + c2);
                        values.push(v1 * v2);
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
        Self {
            domain: self.domain.join(&other.domain),
            row_ptr,
            col_idx,
            values,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    /// Tensor product of the factors, in order, on the joined domain.
    pub fn tensor(factors: &[&Self]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidInput("tensor product of zero factors".into()))?;
        Ok(rest.iter().fold((*first).clone(), |acc, f| acc.kron(f)))
    }

    /// Tensor product checked against a declared domain.
    pub fn tensor_on(domain: &Domain, factors: &[&Self]) -> Result<Self> {
        let found: usize = factors.iter().map(|f| f.domain.n_beams()).sum();
        if found != domain.n_beams() {
            return Err(Error::FactorCount { expected: domain.n_beams(), found });
        }
        let op = Self::tensor(factors)?;
        domain.check(&op.domain)?;
        Ok(op)
    }

    /// Places a single-beam operator on beam `beam` of `domain`, identities elsewhere.
    pub fn embed(&self, beam: usize, domain: &Domain) -> Result<Self> {
        let target = domain
            .beams()
            .get(beam)
            .ok_or_else(|| Error::InvalidInput(format!("beam {beam} outside {}-beam domain", domain.n_beams())))?;
        Domain::single(target.clone()).check(&self.domain)?;
        let ids: Vec<Self> = domain
            .beams()
            .iter()
            .map(|b| Self::identity(Domain::single(b.clone())))
            .collect();
        let factors: Vec<&Self> = ids
            .iter()
            .enumerate()
            .map(|(k, id)| if k == beam { self } else { id })
            .collect();
        Self::tensor(&factors)
    }

    /// Sparse matrix-vector product on raw amplitudes.
    pub fn apply_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim(), "vector length mismatch");
        (0..self.dim())
            .map(|r| self.row(r).fold(C::zero(), |acc, (c, a)| acc + a * v[c]))
            .collect()
    }

    /// Exact `op |ψ⟩` without renormalization; the norm deficit is carried over.
    pub fn apply(&self, state: &MultiBeamState<T>) -> Result<MultiBeamState<T>> {
        self.domain.check(&state.domain)?;
        Ok(MultiBeamState {
            domain: state.domain.clone(),
            amplitudes: self.apply_vec(&state.amplitudes),
            norm_deficit: state.norm_deficit,
        })
    }

    /// `⟨ψ|op|ψ⟩` without normalization or Hermiticity checks.
    pub fn quadratic_form(&self, state: &MultiBeamState<T>) -> Result<C<T>> {
        self.domain.check(&state.domain)?;
        Ok(self.quadratic_form_vec(&state.amplitudes))
    }

    pub(crate) fn quadratic_form_vec(&self, v: &[C<T>]) -> C<T> {
        (0..self.dim()).fold(C::zero(), |acc, r| {
            let row = self.row(r).fold(C::zero(), |s, (c, a)| s + a * v[c]);
            acc + v[r].conj() * row
        })
    }

    /// Entrywise max-norm of `self - other`; domains must have equal dimension.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut m = T::zero();
        for r in 0..self.dim() {
            let mut a = self.row(r).peekable();
            let mut b = other.row(r).peekable();
            loop {
                let d = match (a.peek().copied(), b.peek().copied()) {
                    (None, None) => break,
                    (Some((_, va)), None) => {
                        a.next();
                        va.norm()
                    }
                    (None, Some((_, vb))) => {
                        b.next();
                        vb.norm()
                    }
                    (Some((ca, va)), Some((cb, vb))) => {
                        if ca == cb {
                            a.next();
                            b.next();
                            (va - vb).norm()
                        } else if ca < cb {
                            a.next();
                            va.norm()
                        } else {
                            b.next();
                            vb.norm()
                        }
                    }
                };
                m = m.max(d);
            }
        }
        m
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Dense submatrix on the given index set (rows and columns alike).
    pub fn dense_block(&self, indices: &[usize]) -> DenseMatrix<T> {
        DenseMatrix::from_fn(indices.len(), indices.len(), |i, j| self.entry(indices[i], indices[j]))
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.dense_block(&all)
    }

    /// Overwrites one entry in place, clearing the Hermitian flag. Intended for
    /// fault-injection checks of verification routines.
    pub fn corrupt_entry(&mut self, r: usize, c: usize, value: C<T>) {
        let mut entries: Vec<_> = self.entries().filter(|&(rr, cc, _)| (rr, cc) != (r, c)).collect();
        entries.push((r, c, value));
        *self = Self::from_triplets(self.domain.clone(), entries).expect("corrupted entry in range");
    }
}

/// Row-major CSR assembly; entries must arrive sorted by `(row, column)`.
struct CsrBuilder<T> {
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C<T>>,
}

impl<T: Real> CsrBuilder<T> {
    fn new(dim: usize, capacity: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        Self { row_ptr, col_idx: Vec::with_capacity(capacity), values: Vec::with_capacity(capacity) }
    }

    /// Appends a value to row `r`, skipping exact zeros.
    #[inline]
    fn push(&mut self, r: usize, c: usize, v: C<T>) {
        while self.row_ptr.len() <= r {
            self.row_ptr.push(self.col_idx.len());
        }
        if !v.is_zero() {
            self.col_idx.push(c);
            self.values.push(v);
        }
    }

    fn finish(mut self, domain: Domain, hermitian: bool) -> ComplexOperator<T> {
        let dim = domain.dim();
        while self.row_ptr.len() <= dim {
            self.row_ptr.push(self.col_idx.len());
        }
        ComplexOperator { domain, row_ptr: self.row_ptr, col_idx: self.col_idx, values: self.values, hermitian }
    }
}

/// Applies per-beam factors (`factors[k]` on beam `k`) to raw amplitudes without
/// materializing the Kronecker product.
pub(crate) fn apply_local_product<T: Real>(
    domain: &Domain,
    factors: &[&ComplexOperator<T>],
    v: &[C<T>],
) -> Vec<C<T>> {
    assert_eq!(factors.len(), domain.n_beams(), "one factor per beam");
    let mut cur = v.to_vec();
    let mut next = vec![C::<T>::zero(); cur.len()];
    for (k, op) in factors.iter().enumerate() {
        let stride = domain.stride(k);
        let d = domain.beams()[k].dim();
        debug_assert_eq!(op.dim(), d);
        for (idx, out) in next.iter_mut().enumerate() {
            let digit = (idx / stride) % d;
            let base = idx - digit * stride;
            *out = op.row(digit).fold(C::zero(), |acc, (c, a)| acc + a * cur[base + c * stride]);
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Result of an expectation value: real part plus the separately reported imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation<T> {
    pub value: T,
    pub imag: T,
}

/// `⟨ψ|op|ψ⟩` for a normalized state. For a Hermitian-flagged operator the
/// imaginary part must stay below `1e-12`.
pub fn expectation<T: Real>(op: &ComplexOperator<T>, state: &MultiBeamState<T>) -> Result<Expectation<T>> {
    op.domain.check(&state.domain)?;
    let total = state.norm_sqr() + state.norm_deficit;
    if (total - T::one()).abs() > T::tol(1e-8) {
        return Err(Error::NotNormalized { total: total.as_f64() });
    }
    let z = op.quadratic_form_vec(&state.amplitudes);
    if op.hermitian && z.im.abs() >= T::tol(1e-12) {
        return Err(Error::HermitianViolation { imag: z.im.as_f64() });
    }
    Ok(Expectation { value: z.re, imag: z.im })
}

/// Complex amplitude vector over the tensored basis of a [`Domain`].
///
/// `norm_deficit` records probability mass lost to truncation for states whose
/// exact form has unbounded photon number; `‖ψ‖² + norm_deficit = 1` for
/// in-repo generators.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBeamState<T: Real> {
    domain: Domain,
    amplitudes: Vec<C<T>>,
    norm_deficit: T,
}

impl<T: Real> MultiBeamState<T> {
    pub fn new(domain: Domain, amplitudes: Vec<C<T>>, norm_deficit: T) -> Result<Self> {
        if amplitudes.len() != domain.dim() {
            return Err(Error::InvalidInput(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                domain.dim()
            )));
        }
        if norm_deficit.is_nan() || norm_deficit < T::zero() {
            return Err(Error::InvalidInput("negative norm deficit".into()));
        }
        Ok(Self { domain, amplitudes, norm_deficit })
    }

    pub fn zero(domain: Domain) -> Self {
        let dim = domain.dim();
        Self { domain, amplitudes: vec![C::zero(); dim], norm_deficit: T::zero() }
    }

    /// The basis ket `|occs⟩`.
    pub fn basis(domain: Domain, occs: &[ModeOccupation]) -> Result<Self> {
        Self::from_entries(domain, [(occs.to_vec(), C::one())])
    }

    /// Sparse construction from `(occupations, amplitude)` pairs; repeated kets add up.
    pub fn from_entries(
        domain: Domain,
        entries: impl IntoIterator<Item = (Vec<ModeOccupation>, C<T>)>,
    ) -> Result<Self> {
        let mut state = Self::zero(domain);
        for (occs, amp) in entries {
            let idx = state.domain.encode(&occs).ok_or_else(|| {
                let labels: Vec<String> = occs.iter().map(ToString::to_string).collect();
                Error::InvalidInput(format!("ket |{}⟩ outside the truncated space", labels.join(";")))
            })?;
            state.amplitudes[idx] += amp;
        }
        Ok(state)
    }

    /// Tensor product of per-beam (or per-group) states.
    pub fn product(states: &[&Self]) -> Result<Self> {
        let (first, rest) = states
            .split_first()
            .ok_or_else(|| Error::InvalidInput("product of zero states".into()))?;
        let mut acc = (*first).clone();
        for s in rest {
            let mut amps = Vec::with_capacity(acc.amplitudes.len() * s.amplitudes.len());
            for a in &acc.amplitudes {
                amps.extend(s.amplitudes.iter().map(|b| *a * *b));
            }
            let keep = (T::one() - acc.norm_deficit) * (T::one() - s.norm_deficit);
            acc = Self { domain: acc.domain.join(&s.domain), amplitudes: amps, norm_deficit: T::one() - keep };
        }
        Ok(acc)
    }

    #[inline]
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    #[inline]
    pub fn norm_deficit(&self) -> T {
        self.norm_deficit
    }

    pub fn amplitude(&self, occs: &[ModeOccupation]) -> C<T> {
        self.domain.encode(occs).map_or(C::zero(), |i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        self.domain.check(&other.domain)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(C::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Rescales to unit norm and clears the deficit.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n.is_zero() {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        Ok(Self {
            domain: self.domain.clone(),
            amplitudes: self.amplitudes.iter().map(|z| z.unscale(n)).collect(),
            norm_deficit: T::zero(),
        })
    }

    /// Nonzero amplitudes with their basis labels, in basis order.
    pub fn support(&self) -> impl Iterator<Item = (Vec<ModeOccupation>, C<T>)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| !z.is_zero())
            .map(|(i, z)| (self.domain.decode(i), *z))
    }

    /// Applies `factors[k]` to beam `k` (no Kronecker product is built).
    pub fn apply_local(&self, factors: &[&ComplexOperator<T>]) -> Result<Self> {
        if factors.len() != self.domain.n_beams() {
            return Err(Error::FactorCount { expected: self.domain.n_beams(), found: factors.len() });
        }
        for (f, beam) in factors.iter().zip(self.domain.beams()) {
            Domain::single(beam.clone()).check(&f.domain)?;
        }
        Ok(Self {
            domain: self.domain.clone(),
            amplitudes: apply_local_product(&self.domain, factors, &self.amplitudes),
            norm_deficit: self.norm_deficit,
        })
    }

    /// `⟨ψ| F₁ ⊗ … ⊗ F_n |ψ⟩` with `factors[k]` acting on beam `k`.
    pub fn local_expectation(&self, factors: &[&ComplexOperator<T>]) -> Result<C<T>> {
        let out = self.apply_local(factors)?;
        self.inner(&out)
    }
}
