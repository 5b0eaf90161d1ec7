//! Nonclassicality indicators built from the `G` operators.
//!
//! Every quantity compared against a classical bound is reported with a
//! truncation interval: for states carrying a norm deficit `δ`, an operator of
//! norm `‖A‖` that conserves each beam's photon number can shift the
//! expectation by at most `‖A‖·δ`. A verdict whose interval straddles the
//! bound is reported as inconclusive.

pub mod gram;
pub mod mermin;
pub mod ns_family;
pub mod peres_mermin;
pub mod witness;

use serde::Serialize;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Violated,
    NotViolated,
    Inconclusive,
}

impl Verdict {
    /// Classifies `quantity > bound` given its interval `[lo, hi]`.
    pub fn exceeds<T: Real>(lo: T, hi: T, bound: T) -> Self {
        if lo > bound {
            Verdict::Violated
        } else if hi <= bound {
            Verdict::NotViolated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Classifies `quantity < bound` given its interval `[lo, hi]`.
    pub fn falls_below<T: Real>(lo: T, hi: T, bound: T) -> Self {
        if hi < bound {
            Verdict::Violated
        } else if lo >= bound {
            Verdict::NotViolated
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Violated => "violated",
            Verdict::NotViolated => "not_violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Serializable summary of one indicator evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub quantity: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub interval: [f64; 2],
    pub verdict: Verdict,
}

impl VerdictRecord {
    pub fn new<T: Real>(quantity: impl Into<String>, value: T, bound: T, interval: (T, T), verdict: Verdict) -> Self {
        Self {
            quantity: quantity.into(),
            value: value.as_f64(),
            bound: bound.as_f64(),
            margin: (value - bound).as_f64(),
            interval: [interval.0.as_f64(), interval.1.as_f64()],
            verdict,
        }
    }
}
