//! Three-party Mermin inequality with the dichotomic `G_{i−}` observables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BeamSpace, ComplexOperator, MultiBeamState};
use crate::gpauli::{g, g_minus};
use crate::indicators::{Verdict, VerdictRecord};
use crate::scalar::Real;
use crate::states::prob_diagonal;

/// Local hidden variable bound on `|E|`.
pub const LHV_BOUND: i32 = 2;

/// `E = X₁X₂X₃ − X₁Y₂Y₃ − Y₁X₂Y₃ − Y₁Y₂X₃` as `(sign, [i₁, i₂, i₃])`.
pub const MERMIN_TERMS: [(i32, [u8; 3]); 4] = [(1, [1, 1, 1]), (-1, [1, 2, 2]), (-1, [2, 1, 2]), (-1, [2, 2, 1])];

/// Which local observables enter the expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MerminVariant {
    /// `G_{i−}`, spectrum `{−1, +1}`.
    Dichotomic,
    /// `G_i`, spectrum `{−1, 0, +1}`.
    Unmodified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MerminEvaluation {
    pub variant: MerminVariant,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub p_diag: f64,
    /// `4 − 2P(d)` (dichotomic) or `4 − 4P(d)` (unmodified), present when every
    /// basis state in the support has the same occupation on all three beams.
    pub structured_prediction: Option<f64>,
    pub verdict: Verdict,
}

impl MerminEvaluation {
    pub fn record(&self) -> VerdictRecord {
        let quantity = match self.variant {
            MerminVariant::Dichotomic => "mermin_abs",
            MerminVariant::Unmodified => "mermin_abs_unmodified",
        };
        VerdictRecord::new(quantity, self.value.abs(), LHV_BOUND as f64, (self.lo, self.hi), self.verdict)
    }
}

fn local_ops<T: Real>(variant: MerminVariant, space: &BeamSpace) -> Result<[ComplexOperator<T>; 2]> {
    Ok(match variant {
        MerminVariant::Dichotomic => [g_minus(1, space)?, g_minus(2, space)?],
        MerminVariant::Unmodified => [g(1, space), g(2, space)],
    })
}

/// Support lies on `|p,m; p,m; p,m⟩` kets only.
pub fn is_bghz_structured<T: Real>(state: &MultiBeamState<T>) -> bool {
    state.support().all(|(occs, _)| occs.windows(2).all(|w| w[0] == w[1]))
}

/// `⟨E⟩` on a three-beam state, computed term by term from local operators.
pub fn mermin_value<T: Real>(state: &MultiBeamState<T>, variant: MerminVariant) -> Result<MerminEvaluation> {
    let beams = state.domain().beams();
    if beams.len() != 3 {
        return Err(Error::InvalidInput(format!("Mermin expression needs 3 beams, got {}", beams.len())));
    }
    let ops: Vec<[ComplexOperator<T>; 2]> = beams.iter().map(|b| local_ops(variant, b)).collect::<Result<_>>()?;
    let mut value = T::zero();
    for (sign, idx) in MERMIN_TERMS {
        let f: Vec<&ComplexOperator<T>> = (0..3).map(|k| &ops[k][(idx[k] - 1) as usize]).collect();
        value += T::lit(sign as f64) * state.local_expectation(&f)?.re;
    }
    let p = prob_diagonal(state).value;
    let structured_prediction = is_bghz_structured(state).then(|| {
        let slope = if variant == MerminVariant::Dichotomic { 2.0 } else { 4.0 };
        (T::lit(4.0) - T::lit(slope) * p).as_f64()
    });
    let slack = T::lit(4.0) * state.norm_deficit();
    let lo = (value.abs() - slack).max(T::zero());
    let hi = value.abs() + slack;
    Ok(MerminEvaluation {
        variant,
        value: value.as_f64(),
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        p_diag: p.as_f64(),
        structured_prediction,
        verdict: Verdict::exceeds(lo, hi, T::lit(LHV_BOUND as f64)),
    })
}

/// `⟨E⟩` with the dichotomic observables; violated iff `|E| > 2`.
pub fn mermin_bell_value<T: Real>(state: &MultiBeamState<T>) -> Result<MerminEvaluation> {
    mermin_value(state, MerminVariant::Dichotomic)
}

/// The expression for one local assignment `v[party][0] = X`, `v[party][1] = Y`.
pub fn mermin_expression(v: &[[i32; 2]; 3]) -> i32 {
    MERMIN_TERMS
        .iter()
        .map(|(s, idx)| s * (0..3).map(|k| v[k][(idx[k] - 1) as usize]).product::<i32>())
        .sum()
}

/// Maximum of `|E|` over every deterministic `±1` assignment (`2⁶` of them).
pub fn lhv_bound_oracle() -> i32 {
    (0u32..64)
        .map(|bits| {
            let val = |b: u32| if bits >> b & 1 == 1 { -1 } else { 1 };
            let v = [[val(0), val(1)], [val(2), val(3)], [val(4), val(5)]];
            mermin_expression(&v).abs()
        })
        .max()
        .expect("nonempty enumeration")
}
