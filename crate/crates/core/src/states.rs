//! State generators: bright squeezed vacuum, bright GHZ, `ψ_nm` superpositions,
//! single-photon qubit embeddings and random product states, plus the
//! diagonal-subspace probability `P(d|ψ)`.

use std::path::Path;

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BeamSpace, Domain, ModeOccupation, MultiBeamState};
use crate::linalg::{expm, DenseMatrix};
use crate::scalar::{factorial, re, Real, C};

/// Largest reduced dimension the dense generator exponential accepts by default.
pub const DEFAULT_MAX_DENSE_DIM: usize = 10_000;

/// Parameters of the 2×2 bright squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsvParams<T> {
    /// Amplification gain Γ ≥ 0.
    pub gamma: T,
    /// Per-beam total-photon cutoff.
    pub cutoff: usize,
}

/// Probability mass of the BSV beyond `cutoff` photons per beam:
/// `sech⁴Γ · Σ_{n>cutoff} (n+1) tanh²ⁿΓ`, summed in closed form.
pub fn bsv_tail<T: Real>(gamma: T, cutoff: usize) -> T {
    let x = gamma.tanh().powi(2);
    let n = T::from_usize(cutoff + 1);
    x.powf(n) * (T::one() + n * (T::one() - x))
}

/// Truncated 2×2 bright squeezed vacuum
/// `sech²Γ Σ_n tanhⁿΓ Σ_{m≤n} (−1)^m |n−m, m; m, n−m⟩`.
///
/// The state is not renormalized; the analytic tail is stored as the norm deficit.
pub fn bsv_state<T: Real>(params: BsvParams<T>) -> Result<MultiBeamState<T>> {
    let BsvParams { gamma, cutoff } = params;
    if !gamma.is_finite() || gamma < T::zero() {
        return Err(Error::InvalidInput(format!("gain must be finite and >= 0, got {gamma}")));
    }
    let domain = Domain::uniform(2, cutoff);
    let prefactor = T::one() / gamma.cosh().powi(2);
    let t = gamma.tanh();
    let mut entries = Vec::new();
    let mut tn = T::one();
    for n in 0..=cutoff {
        if n > 0 {
            tn = tn * t;
        }
        if tn.is_zero() {
            break;
        }
        for m in 0..=n {
            let sgn = if m % 2 == 0 { T::one() } else { -T::one() };
            let occs = vec![ModeOccupation::new(n - m, m), ModeOccupation::new(m, n - m)];
            entries.push((occs, re(prefactor * tn * sgn)));
        }
    }
    let state = MultiBeamState::from_entries(domain, entries)?;
    MultiBeamState::new(state.domain().clone(), state.amplitudes().to_vec(), bsv_tail(gamma, cutoff))
}

/// `P(d|ψ)` with the truncation interval `[value, value + norm_deficit]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityInterval<T> {
    pub value: T,
    pub lo: T,
    pub hi: T,
}

/// Probability of the diagonal subspace: some beam has equal occupations.
pub fn prob_diagonal<T: Real>(state: &MultiBeamState<T>) -> ProbabilityInterval<T> {
    let domain = state.domain();
    let value: T = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, z)| !z.is_zero())
        .filter(|(i, _)| domain.decode(*i).iter().any(|o| o.is_diagonal()))
        .map(|(_, z)| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    ProbabilityInterval { value, lo: value, hi: (value + state.norm_deficit()).min(T::one()) }
}

/// Ordered coefficients `C_0 … C_M` of the bright GHZ expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BghzCoefficients<T: Real> {
    entries: Vec<C<T>>,
}

impl<T: Real> BghzCoefficients<T> {
    pub fn new(entries: Vec<C<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        if entries.iter().all(|z| z.is_zero()) {
            return Err(Error::ZeroCoefficients);
        }
        Ok(Self { entries })
    }

    /// Parses `m,real,imag` lines with consecutive `m` from 0 (no header).
    /// Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse_err = |message: String| Error::Parse { line: lineno, message };
            if fields.len() != 3 {
                return Err(parse_err(format!("expected `m,real,imag`, found {} field(s)", fields.len())));
            }
            let m: usize = fields[0].parse().map_err(|_| parse_err(format!("invalid index `{}`", fields[0])))?;
            if m != entries.len() {
                return Err(parse_err(format!("expected index {}, found {m}", entries.len())));
            }
            let num = |s: &str| -> Result<T> {
                let v: f64 = s.parse().map_err(|_| parse_err(format!("invalid number `{s}`")))?;
                if !v.is_finite() {
                    return Err(parse_err(format!("non-finite number `{s}`")));
                }
                Ok(T::lit(v))
            };
            entries.push(Complex::new(num(fields[1])?, num(fields[2])?));
        }
        Self::new(entries)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    #[inline]
    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    /// Largest per-beam photon number carried by the expansion (`2M`).
    pub fn max_photons(&self) -> usize {
        2 * (self.entries.len() - 1)
    }
}

/// Bright GHZ state `Σ_k Σ_m C_{k−m} C_m (a₁†a₂†a₃†)^{k−m} (b₁†b₂†b₃†)^m |Ω⟩`,
/// normalized over the full (finite) expansion. Terms with more than `cutoff`
/// photons per beam are dropped and counted in the norm deficit.
pub fn bghz_state<T: Real>(coeffs: &BghzCoefficients<T>, cutoff: usize) -> Result<MultiBeamState<T>> {
    let c = coeffs.entries();
    let big_m = c.len() - 1;
    let mut kept = Vec::new();
    let mut total = T::zero();
    let mut kept_mass = T::zero();
    for k in 0..=2 * big_m {
        for m in k.saturating_sub(big_m)..=k.min(big_m) {
            let p = k - m;
            let norm = (factorial::<T>(p) * factorial::<T>(m)).powf(T::lit(1.5));
            let amp = c[p] * c[m] * norm;
            let w = amp.norm_sqr();
            total += w;
            if k <= cutoff && !amp.is_zero() {
                kept_mass += w;
                kept.push((vec![ModeOccupation::new(p, m); 3], amp));
            }
        }
    }
    if total.is_zero() {
        return Err(Error::ZeroCoefficients);
    }
    let scale = T::one() / total.sqrt();
    let state = MultiBeamState::from_entries(
        Domain::uniform(3, cutoff),
        kept.into_iter().map(|(o, a)| (o, a * scale)),
    )?;
    let deficit = ((total - kept_mass) / total).max(T::zero());
    MultiBeamState::new(state.domain().clone(), state.amplitudes().to_vec(), deficit)
}

/// `(|n,m;n,m;n,m⟩ + |m,n;m,n;m,n⟩)/√2` for `n ≠ m`.
pub fn psi_nm_state<T: Real>(n: usize, m: usize, cutoff: usize) -> Result<MultiBeamState<T>> {
    if n == m {
        return Err(Error::InvalidInput(format!("psi_nm needs n != m (got n = m = {n}); that ket is diagonal")));
    }
    if n + m > cutoff {
        return Err(Error::InvalidInput(format!("psi_{n}{m} needs cutoff >= {}", n + m)));
    }
    let h = re(T::FRAC_1_SQRT_2());
    MultiBeamState::from_entries(
        Domain::uniform(3, cutoff),
        [
            (vec![ModeOccupation::new(n, m); 3], h),
            (vec![ModeOccupation::new(m, n); 3], h),
        ],
    )
}

/// Embeds a 2- or 3-qubit pure state: `|0⟩ ↦ |1,0⟩`, `|1⟩ ↦ |0,1⟩` on each beam.
/// Amplitudes are indexed with party 0 as the most significant bit.
pub fn qubit_embed<T: Real>(amplitudes: &[C<T>]) -> Result<MultiBeamState<T>> {
    let parties = match amplitudes.len() {
        4 => 2,
        8 => 3,
        n => return Err(Error::InvalidInput(format!("expected 4 or 8 qubit amplitudes, got {n}"))),
    };
    let norm: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    if (norm - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::NotNormalized { total: norm.as_f64() });
    }
    let entries = amplitudes.iter().enumerate().map(|(idx, &amp)| {
        let occs = (0..parties)
            .map(|p| {
                if (idx >> (parties - 1 - p)) & 1 == 0 {
                    ModeOccupation::new(1, 0)
                } else {
                    ModeOccupation::new(0, 1)
                }
            })
            .collect();
        (occs, amp)
    });
    MultiBeamState::from_entries(Domain::uniform(parties, 1), entries)
}

fn gaussian_vector<T: Real>(rng: &mut ChaCha8Rng, len: usize) -> Vec<C<T>> {
    loop {
        let v: Vec<C<T>> = (0..len)
            .map(|_| {
                let a: f64 = StandardNormal.sample(rng);
                let b: f64 = StandardNormal.sample(rng);
                Complex::new(T::lit(a), T::lit(b))
            })
            .collect();
        let n: T = v.iter().map(|z| z.norm_sqr()).sum();
        if n > T::zero() {
            let s = n.sqrt();
            return v.into_iter().map(|z| z.unscale(s)).collect();
        }
    }
}

/// Product state `F₁†…F_n†|Ω⟩`: each beam gets an independent normalized complex
/// Gaussian vector over the occupations with at most `degree` photons.
pub fn random_separable<T: Real>(seed: u64, n_beams: usize, cutoff: usize, degree: usize) -> Result<MultiBeamState<T>> {
    if degree > cutoff {
        return Err(Error::InvalidInput(format!("degree {degree} exceeds cutoff {cutoff}")));
    }
    if n_beams == 0 {
        return Err(Error::InvalidInput("at least one beam required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = BeamSpace::new(cutoff);
    let live = space.block(degree).end;
    let beams: Vec<MultiBeamState<T>> = (0..n_beams)
        .map(|_| {
            let mut amps = gaussian_vector::<T>(&mut rng, live);
            amps.resize(space.dim(), C::zero());
            MultiBeamState::new(Domain::single(space.clone()), amps, T::zero()).expect("length matches")
        })
        .collect();
    let refs: Vec<&MultiBeamState<T>> = beams.iter().collect();
    MultiBeamState::product(&refs)
}

/// Generic (typically entangled) pure state: a normalized complex Gaussian vector
/// over the whole tensored basis.
pub fn random_pure<T: Real>(seed: u64, n_beams: usize, cutoff: usize) -> MultiBeamState<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = Domain::uniform(n_beams, cutoff);
    let amps = gaussian_vector(&mut rng, domain.dim());
    MultiBeamState::new(domain, amps, T::zero()).expect("length matches")
}

/// Convex mixture `Σ p_i |φ_i⟩⟨φ_i|` of pure states on one domain.
#[derive(Debug, Clone)]
pub struct EnsembleState<T: Real> {
    members: Vec<(T, MultiBeamState<T>)>,
}

impl<T: Real> EnsembleState<T> {
    pub fn new(members: Vec<(T, MultiBeamState<T>)>) -> Result<Self> {
        let (_, first) = members.first().ok_or_else(|| Error::InvalidInput("empty ensemble".into()))?;
        let domain = first.domain().clone();
        for (w, s) in &members {
            if w.is_nan() || *w <= T::zero() {
                return Err(Error::InvalidInput(format!("ensemble weight {w} is not positive")));
            }
            domain.check(s.domain())?;
        }
        let sum: T = members.iter().map(|(w, _)| *w).sum();
        if (sum - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::InvalidInput(format!("ensemble weights sum to {sum}, not 1")));
        }
        Ok(Self { members })
    }

    #[inline]
    pub fn members(&self) -> &[(T, MultiBeamState<T>)] {
        &self.members
    }

    pub fn domain(&self) -> &Domain {
        self.members[0].1.domain()
    }
}

/// Truncated-propagator stand-in for the bright GHZ state:
/// `exp(Γ(a₁†a₂†a₃† + s·b₁†b₂†b₃† − h.c.))|Ω⟩` with `s = relative_sign`.
///
/// The propagator is exponentiated densely on the invariant subspace of kets
/// `|p,q;p,q;p,q⟩` with `p + q ≤ cutoff`. Amplitudes near the cutoff are
/// distorted by truncation, so results are qualitative only.
pub fn bghz_generator_state<T: Real>(
    gamma: T,
    cutoff: usize,
    relative_sign: T,
    max_dim: usize,
) -> Result<MultiBeamState<T>> {
    if !gamma.is_finite() {
        return Err(Error::InvalidInput("gain must be finite".into()));
    }
    let reduced = BeamSpace::new(cutoff);
    let dim = reduced.dim();
    if dim > max_dim {
        return Err(Error::DimensionExceeded { dim, max: max_dim });
    }
    let mut gen = DenseMatrix::<T>::zeros(dim, dim);
    for (col, &o) in reduced.basis().iter().enumerate() {
        let raise = [
            (ModeOccupation::new(o.n_a + 1, o.n_b), T::from_usize(o.n_a + 1), T::one()),
            (ModeOccupation::new(o.n_a, o.n_b + 1), T::from_usize(o.n_b + 1), relative_sign),
        ];
        for (target, level, s) in raise {
            if let Some(row) = reduced.index_of(target) {
                let v = gamma * s * level.powf(T::lit(1.5));
                gen[(row, col)] += re(v);
                gen[(col, row)] -= re(v);
            }
        }
    }
    let prop = expm(&gen);
    let entries = reduced
        .basis()
        .iter()
        .enumerate()
        .map(|(i, &o)| (vec![o; 3], prop[(i, 0)]))
        .filter(|(_, a)| !a.is_zero());
    let state = MultiBeamState::from_entries(Domain::uniform(3, cutoff), entries)?;
    state.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(a: usize, b: usize) -> ModeOccupation {
        ModeOccupation::new(a, b)
    }

    #[test]
    fn bsv_vacuum_at_zero_gain() {
        let s = bsv_state::<f64>(BsvParams { gamma: 0.0, cutoff: 5 }).unwrap();
        assert_eq!(s.amplitude(&[occ(0, 0), occ(0, 0)]), C::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.norm_deficit(), 0.0);
    }

    #[test]
    fn bsv_tail_small_at_cutoff_40() {
        let s = bsv_state::<f64>(BsvParams { gamma: 1.0, cutoff: 40 }).unwrap();
        assert!(s.norm_deficit() < 1e-8);
        assert!((s.norm_sqr() + s.norm_deficit() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bsv_tail_matches_direct_sum() {
        for &(g, c) in &[(0.3, 4usize), (1.0, 10), (1.5, 25)] {
            let t2 = f64::tanh(g).powi(2);
            let direct: f64 = (c + 1..4000).map(|n| (n + 1) as f64 * t2.powi(n as i32)).sum::<f64>() / f64::cosh(g).powi(4);
            assert!((bsv_tail(g, c) - direct).abs() < 1e-14 * direct.max(1.0), "{g} {c}");
        }
    }

    #[test]
    fn bsv_one_photon_sign() {
        let g = 0.7f64;
        let s = bsv_state(BsvParams { gamma: g, cutoff: 3 }).unwrap();
        let a = s.amplitude(&[occ(1, 0), occ(0, 1)]);
        let b = s.amplitude(&[occ(0, 1), occ(1, 0)]);
        assert!((a.re - g.tanh() / g.cosh().powi(2)).abs() < 1e-15);
        assert_eq!(a, -b);
    }

    #[test]
    fn bsv_rejects_bad_gain() {
        assert!(bsv_state(BsvParams { gamma: f64::NAN, cutoff: 2 }).is_err());
        assert!(bsv_state(BsvParams { gamma: -0.1, cutoff: 2 }).is_err());
    }

    #[test]
    fn prob_diagonal_basis_ket() {
        let d = Domain::uniform(2, 2);
        let s = MultiBeamState::<f64>::basis(d, &[occ(1, 1), occ(2, 0)]).unwrap();
        assert_eq!(prob_diagonal(&s).value, 1.0);
    }

    #[test]
    fn coefficient_parsing() {
        let c = BghzCoefficients::<f64>::parse("0,1.0,0\n1,0.5,-0.25\n\n2,1e-2,0\n").unwrap();
        assert_eq!(c.entries().len(), 3);
        assert_eq!(c.entries()[1], C::new(0.5, -0.25));
        let err = BghzCoefficients::<f64>::parse("0,1,0\n2,1,0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = BghzCoefficients::<f64>::parse("0,1,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = BghzCoefficients::<f64>::parse("0,1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert_eq!(BghzCoefficients::<f64>::parse("0,0,0\n").unwrap_err(), Error::ZeroCoefficients);
    }

    #[test]
    fn bghz_single_coefficient_is_vacuum() {
        let c = BghzCoefficients::new(vec![C::new(1.0, 0.0)]).unwrap();
        let s = bghz_state::<f64>(&c, 3).unwrap();
        assert!((s.amplitude(&[occ(0, 0); 3]).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bghz_pair_amplitudes_equal() {
        let z = 1.0 / 2f64.sqrt();
        let c = BghzCoefficients::new(vec![C::new(z, 0.0), C::new(z, 0.0)]).unwrap();
        let s = bghz_state::<f64>(&c, 2).unwrap();
        let a = s.amplitude(&[occ(1, 0); 3]);
        let b = s.amplitude(&[occ(0, 1); 3]);
        assert!(a.norm() > 0.1);
        assert_eq!(a, b);
        assert_eq!(s.norm_deficit(), 0.0);
        assert!((prob_diagonal(&s).value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn bghz_truncation_is_counted() {
        let c = BghzCoefficients::new(vec![C::new(1.0, 0.0), C::new(0.4, 0.1), C::new(0.1, 0.0)]).unwrap();
        let s = bghz_state::<f64>(&c, 2).unwrap();
        assert!(s.norm_deficit() > 0.0);
        assert!((s.norm_sqr() + s.norm_deficit() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi_nm_basics() {
        let s = psi_nm_state::<f64>(1, 0, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.amplitude(&[occ(1, 0); 3]), C::new(h, 0.0));
        assert_eq!(s.amplitude(&[occ(0, 1); 3]), C::new(h, 0.0));
        assert!(psi_nm_state::<f64>(2, 2, 4).is_err());
        assert!(psi_nm_state::<f64>(3, 1, 3).is_err());
    }

    #[test]
    fn embed_singlet() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C::zero();
        let s = qubit_embed(&[z, C::new(h, 0.0), C::new(-h, 0.0), z]).unwrap();
        assert_eq!(s.amplitude(&[occ(1, 0), occ(0, 1)]), C::new(h, 0.0));
        assert_eq!(s.amplitude(&[occ(0, 1), occ(1, 0)]), C::new(-h, 0.0));
        assert_eq!(prob_diagonal(&s).value, 0.0);
        assert!(qubit_embed(&[C::new(1.0, 0.0), C::new(1.0, 0.0), z, z]).is_err());
        assert!(qubit_embed::<f64>(&[z; 3]).is_err());
    }

    #[test]
    fn random_separable_degree_zero_is_vacuum() {
        let s = random_separable::<f64>(7, 3, 2, 0).unwrap();
        assert!((s.amplitude(&[occ(0, 0); 3]).norm() - 1.0).abs() < 1e-14);
        assert!(random_separable::<f64>(7, 2, 1, 2).is_err());
    }

    #[test]
    fn random_separable_is_deterministic() {
        let a = random_separable::<f64>(42, 2, 3, 3).unwrap();
        let b = random_separable::<f64>(42, 2, 3, 3).unwrap();
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ensemble_validation() {
        let s = random_pure::<f64>(1, 2, 1);
        assert!(EnsembleState::new(vec![(0.5, s.clone()), (0.5, s.clone())]).is_ok());
        assert!(EnsembleState::new(vec![(0.6, s.clone()), (0.5, s.clone())]).is_err());
        assert!(EnsembleState::new(vec![(1.0, s), (0.0, random_pure(2, 2, 1))]).is_err());
    }

    #[test]
    fn generator_vacuum_and_bound() {
        let s = bghz_generator_state::<f64>(0.0, 4, 1.0, DEFAULT_MAX_DENSE_DIM).unwrap();
        assert!((s.amplitude(&[occ(0, 0); 3]).norm() - 1.0).abs() < 1e-14);
        assert_eq!(
            bghz_generator_state::<f64>(0.1, 10, 1.0, 20).unwrap_err(),
            Error::DimensionExceeded { dim: 66, max: 20 }
        );
    }

    #[test]
    fn generator_symmetry() {
        let s = bghz_generator_state::<f64>(0.4, 6, 1.0, DEFAULT_MAX_DENSE_DIM).unwrap();
        for (occs, _) in s.support() {
            assert!(occs.iter().all(|o| *o == occs[0]));
        }
        for p in 0..=6usize {
            for q in 0..=(6 - p) {
                let a = s.amplitude(&[occ(p, q); 3]);
                let b = s.amplitude(&[occ(q, p); 3]);
                assert!((a - b).norm() < 1e-10);
            }
        }
    }
}
