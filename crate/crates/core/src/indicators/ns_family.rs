//! Two-beam entanglement test family
//! `⟨G₁G₁ + G₂G₂⟩² + ⟨G₃G₀ + G₀G₃⟩² ≤ ⟨G₀G₀ + G₃G₃⟩²`
//! together with its images under cyclic relabelling `1→2→3→1` of either party.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::MultiBeamState;
use crate::gpauli::GSet;
use crate::indicators::Verdict;
use crate::scalar::Real;

/// Slack added to the right-hand side before a member counts as violated.
pub const NS_TOLERANCE: f64 = 1e-10;

/// Cyclic relabelling of `{1,2,3}` by `shift` steps; `0` is fixed.
pub fn cycle(index: u8, shift: u8) -> u8 {
    if index == 0 {
        0
    } else {
        (index - 1 + shift) % 3 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsMember {
    pub shift_party1: u8,
    pub shift_party2: u8,
    /// `⟨G_{π₁(1)}G_{π₂(1)} + G_{π₁(2)}G_{π₂(2)}⟩`
    pub lhs_first: f64,
    /// `⟨G_{π₁(3)}G₀ + G₀G_{π₂(3)}⟩`
    pub lhs_second: f64,
    /// `⟨G₀G₀ + G_{π₁(3)}G_{π₂(3)}⟩`
    pub rhs: f64,
    pub lhs_squared: f64,
    pub rhs_squared: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsFamilyReport {
    pub members: Vec<NsMember>,
    /// Entanglement detected by at least one member. Absence of detection is
    /// not a separability claim.
    pub detected: bool,
    pub verdict: Verdict,
}

/// Interval of `x²` when `x ∈ [v − s, v + s]`.
fn square_interval<T: Real>(v: T, s: T) -> (T, T) {
    let lo = (v.abs() - s).max(T::zero());
    (lo * lo, (v.abs() + s).powi(2))
}

/// Evaluates all nine members on a two-beam state.
pub fn ns_condition_family<T: Real>(state: &MultiBeamState<T>) -> Result<NsFamilyReport> {
    let beams = state.domain().beams();
    if beams.len() != 2 {
        return Err(Error::InvalidInput(format!("test family needs 2 beams, got {}", beams.len())));
    }
    let g1 = GSet::<T>::direct(&beams[0]);
    let g2 = GSet::<T>::direct(&beams[1]);
    // All sixteen correlators ⟨G_i G_j⟩; members reuse them.
    let mut table = [[T::zero(); 4]; 4];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = state.local_expectation(&[&g1.ops[i], &g2.ops[j]])?.re;
        }
    }
    let corr = |i: u8, j: u8| -> Result<T> { Ok(table[i as usize][j as usize]) };
    // Each bracket is a sum of two norm-1 operators.
    let slack = T::lit(2.0) * state.norm_deficit();
    let tol = T::lit(NS_TOLERANCE);

    let mut members = Vec::with_capacity(9);
    for s1 in 0..3u8 {
        for s2 in 0..3u8 {
            let (a, b) = (|i| cycle(i, s1), |j| cycle(j, s2));
            let first = corr(a(1), b(1))? + corr(a(2), b(2))?;
            let second = corr(a(3), 0)? + corr(0, b(3))?;
            let rhs = corr(0, 0)? + corr(a(3), b(3))?;
            let (f_lo, f_hi) = square_interval(first, slack);
            let (s_lo, s_hi) = square_interval(second, slack);
            let (r_lo, r_hi) = square_interval(rhs, slack);
            let verdict = if f_lo + s_lo > r_hi + tol {
                Verdict::Violated
            } else if f_hi + s_hi <= r_lo + tol {
                Verdict::NotViolated
            } else {
                Verdict::Inconclusive
            };
            members.push(NsMember {
                shift_party1: s1,
                shift_party2: s2,
                lhs_first: first.as_f64(),
                lhs_second: second.as_f64(),
                rhs: rhs.as_f64(),
                lhs_squared: (first * first + second * second).as_f64(),
                rhs_squared: (rhs * rhs).as_f64(),
                verdict,
            });
        }
    }
    let detected = members.iter().any(|m| m.verdict == Verdict::Violated);
    let verdict = if detected {
        Verdict::Violated
    } else if members.iter().any(|m| m.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::NotViolated
    };
    Ok(NsFamilyReport { members, detected, verdict })
}
