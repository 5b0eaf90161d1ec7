//! Peres-Mermin square over two beams and its noncontextual bound.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::{BeamSpace, ComplexOperator, Domain, MultiBeamState};
use crate::gpauli::{g, GSet};
use crate::indicators::{Verdict, VerdictRecord};
use crate::scalar::Real;
use crate::states::{prob_diagonal, ProbabilityInterval};

/// `A_pq = G_i¹ G_j²` stored as `(i, j)` at `[p-1][q-1]`.
///
/// Lines sharing an index commute. The three rows and the first two columns
/// multiply to `G₀¹G₀²`; the third column `(G₃G₃, G₁G₁, G₂G₂)` multiplies to
/// `−G₀¹G₀²` and enters `O` with a minus sign.
pub const PM_TABLE: [[(u8, u8); 3]; 3] = [
    [(3, 0), (0, 3), (3, 3)],
    [(0, 1), (1, 0), (1, 1)],
    [(3, 1), (1, 3), (2, 2)],
];

/// Classical (noncontextual) bound of the six-line expression.
pub const NCHV_BOUND: i32 = 4;

/// A line of the square: three cells and the sign it carries in `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub cells: [(usize, usize); 3],
    pub sign: i32,
}

/// The six lines in the order they enter `O`: rows 1-3, then columns 1-3.
pub fn lines() -> [Line; 6] {
    let row = |p: usize| Line { cells: [(p, 0), (p, 1), (p, 2)], sign: 1 };
    let col = |q: usize, sign| Line { cells: [(0, q), (1, q), (2, q)], sign };
    [row(0), row(1), row(2), col(0, 1), col(1, 1), col(2, -1)]
}

/// The square's nine two-beam observables plus the assembled operator `O`.
#[derive(Debug, Clone)]
pub struct PeresMerminSquare<T: Real> {
    cells: Vec<Vec<ComplexOperator<T>>>,
    operator: ComplexOperator<T>,
    commutator_residual: T,
}

impl<T: Real> PeresMerminSquare<T> {
    /// Builds the square on two beams and checks that every line commutes.
    pub fn new(beam1: &BeamSpace, beam2: &BeamSpace) -> Result<Self> {
        let g1 = GSet::<T>::direct(beam1);
        let g2 = GSet::<T>::direct(beam2);
        let cells: Vec<Vec<ComplexOperator<T>>> = PM_TABLE
            .iter()
            .map(|row| row.iter().map(|&(i, j)| g1.ops[i as usize].kron(&g2.ops[j as usize])).collect())
            .collect();
        let domain = cells[0][0].domain().clone();
        let mut residual = T::zero();
        let mut operator = ComplexOperator::zero(domain);
        for line in lines() {
            let [a, b, c] = line.cells.map(|(p, q)| &cells[p][q]);
            for (x, y) in [(a, b), (a, c), (b, c)] {
                residual = residual.max(x.commutator(y)?.max_abs());
            }
            let product = a.matmul(b)?.matmul(c)?;
            operator = operator.add(&product.scale_real(T::lit(line.sign as f64)))?;
        }
        if residual >= T::tol(1e-12) {
            return Err(Error::InvalidInput(format!(
                "Peres-Mermin table lines do not commute (residual {residual})"
            )));
        }
        Ok(Self { cells, operator, commutator_residual: residual })
    }

    pub fn for_domain(domain: &Domain) -> Result<Self> {
        match domain.beams() {
            [a, b] => Self::new(a, b),
            _ => Err(Error::InvalidInput(format!(
                "Peres-Mermin square needs 2 beams, got {}",
                domain.n_beams()
            ))),
        }
    }

    #[inline]
    pub fn cell(&self, p: usize, q: usize) -> &ComplexOperator<T> {
        &self.cells[p][q]
    }

    /// `O = Σ_lines sign · A A A`.
    #[inline]
    pub fn operator(&self) -> &ComplexOperator<T> {
        &self.operator
    }

    #[inline]
    pub fn commutator_residual(&self) -> T {
        self.commutator_residual
    }

    /// Largest deviation of a line product from `sign · G₀¹G₀²`.
    pub fn line_product_residual(&self) -> Result<T> {
        let domain = self.operator.domain();
        let (b1, b2) = (&domain.beams()[0], &domain.beams()[1]);
        let g00 = g::<T>(0, b1).kron(&g::<T>(0, b2));
        let mut worst = T::zero();
        for line in lines() {
            let [a, b, c] = line.cells.map(|(p, q)| &self.cells[p][q]);
            let product = a.matmul(b)?.matmul(c)?;
            let expect = g00.scale_real(T::lit(line.sign as f64));
            worst = worst.max(product.max_abs_diff(&expect));
        }
        Ok(worst)
    }

    pub fn evaluate(&self, state: &MultiBeamState<T>) -> Result<PmEvaluation<T>> {
        let value = self.operator.quadratic_form(state)?.re;
        let p_diag = prob_diagonal(state);
        let six = T::lit(6.0);
        let shortcut = six - six * p_diag.value;
        let deficit = state.norm_deficit();
        let residual = (value - shortcut).abs();
        if residual > T::tol(1e-10) + six * deficit {
            return Err(Error::InvalidInput(format!(
                "operator value {value} disagrees with 6 - 6 P(d) = {shortcut}"
            )));
        }
        Ok(PmEvaluation { value, shortcut, p_diag, lo: value - six * deficit, hi: value + six * deficit })
    }
}

/// `⟨O⟩` computed from the explicit operator, with the `6 − 6P(d)` cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmEvaluation<T> {
    pub value: T,
    pub shortcut: T,
    pub p_diag: ProbabilityInterval<T>,
    /// Truncation interval of the exact `⟨O⟩`.
    pub lo: T,
    pub hi: T,
}

impl<T: Real> PmEvaluation<T> {
    pub fn margin(&self) -> T {
        self.value - T::lit(NCHV_BOUND as f64)
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::exceeds(self.lo, self.hi, T::lit(NCHV_BOUND as f64))
    }

    pub fn record(&self) -> VerdictRecord {
        VerdictRecord::new(
            "peres_mermin",
            self.value,
            T::lit(NCHV_BOUND as f64),
            (self.lo, self.hi),
            self.verdict(),
        )
    }
}

/// `⟨O⟩` on a two-beam state via explicit operator products.
pub fn pm_expectation<T: Real>(state: &MultiBeamState<T>) -> Result<PmEvaluation<T>> {
    PeresMerminSquare::for_domain(state.domain())?.evaluate(state)
}

/// Violation of the noncontextual bound: `⟨O⟩ > 4`, i.e. `P(d) < 1/3`.
pub fn contextuality_verdict<T: Real>(state: &MultiBeamState<T>) -> Result<VerdictRecord> {
    Ok(pm_expectation(state)?.record())
}

/// Gain at which `sech(2Γ) = 1/3`, i.e. `acosh(3)/2`.
pub fn bsv_contextuality_threshold<T: Real>() -> T {
    T::lit(3.0).acosh() / T::lit(2.0)
}

/// Value of the six-line expression for a noncontextual assignment `v[p][q]`.
pub fn pm_expression(v: &[[i32; 3]; 3]) -> i32 {
    lines()
        .iter()
        .map(|l| l.sign * l.cells.iter().map(|&(p, q)| v[p][q]).product::<i32>())
        .sum()
}

/// Maximum of the expression over all assignments with values from `alphabet`.
pub fn nchv_bound_over(alphabet: &[i32]) -> i32 {
    let k = alphabet.len();
    assert!(k > 0, "empty value alphabet");
    let total = k.pow(9);
    (0..total)
        .map(|mut code| {
            let mut v = [[0i32; 3]; 3];
            for cell in v.iter_mut().flatten() {
                *cell = alphabet[code % k];
                code /= k;
            }
            pm_expression(&v)
        })
        .max()
        .expect("at least one assignment")
}

/// Brute-force noncontextual maximum over `{−1, 0, +1}⁹`.
pub fn nchv_bound_oracle() -> i32 {
    nchv_bound_over(&[-1, 0, 1])
}

/// Applies `O` via the explicit cell operators to a raw amplitude vector, without
/// the assembled operator. Used as an independent route in tests.
pub fn pm_value_by_cells<T: Real>(square: &PeresMerminSquare<T>, state: &MultiBeamState<T>) -> Result<T> {
    let mut total = Complex::new(T::zero(), T::zero());
    for line in lines() {
        let mut v = state.clone();
        for &(p, q) in line.cells.iter().rev() {
            v = square.cell(p, q).apply(&v)?;
        }
        total += state.inner(&v)? * T::lit(line.sign as f64);
    }
    Ok(total.re)
}
