//! Plain-text amplitude files.
//!
//! One basis state per line: `n_a1,n_b1,n_a2,n_b2[,n_a3,n_b3],re,im`. Blank
//! lines and lines starting with `#` are skipped. Repeated labels add up.

use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::{Domain, ModeOccupation, MultiBeamState};
use crate::scalar::Real;

/// Deficit above which [`LoadedState::warning`] is set.
pub const RENORMALIZATION_WARN: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct LoadedState<T: Real> {
    /// The normalized state.
    pub state: MultiBeamState<T>,
    /// `1 − Σ|c|²` of the file as written.
    pub raw_deficit: T,
    pub warning: Option<String>,
}

/// Parses amplitude-file text. `cutoff` defaults to the largest photon number present.
pub fn parse_amplitudes<T: Real>(text: &str, cutoff: Option<usize>) -> Result<LoadedState<T>> {
    let mut rows: Vec<(Vec<ModeOccupation>, Complex<T>)> = Vec::new();
    let mut n_beams = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let beams = match fields.len() {
            6 => 2,
            8 => 3,
            n => return Err(err(format!("expected 6 or 8 comma-separated fields, found {n}"))),
        };
        if *n_beams.get_or_insert(beams) != beams {
            return Err(err(format!("line has {beams} beams, earlier lines have {}", n_beams.unwrap_or(0))));
        }
        let counts = fields[..2 * beams]
            .iter()
            .map(|f| f.parse::<usize>().map_err(|e| err(format!("photon number {f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let num = |f: &str| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(T::lit)
                .ok_or_else(|| err(format!("amplitude component {f:?} is not a finite number")))
        };
        let amp = Complex::new(num(fields[2 * beams])?, num(fields[2 * beams + 1])?);
        let occs = counts.chunks(2).map(|p| ModeOccupation::new(p[0], p[1])).collect();
        rows.push((occs, amp));
    }
    let n_beams = n_beams.ok_or_else(|| Error::Parse { line: 0, message: "no amplitudes found".into() })?;
    let max_total = rows.iter().flat_map(|(o, _)| o.iter().map(|x| x.total())).max().unwrap_or(0);
    let cutoff = cutoff.unwrap_or(max_total);
    if max_total > cutoff {
        return Err(Error::InvalidInput(format!("file has {max_total} photons in a beam, cutoff is {cutoff}")));
    }
    let raw = MultiBeamState::from_entries(Domain::uniform(n_beams, cutoff), rows)?;
    let norm = raw.norm_sqr();
    if norm <= T::zero() {
        return Err(Error::Parse { line: 0, message: "all amplitudes are zero".into() });
    }
    let raw_deficit = T::one() - norm;
    let warning = (raw_deficit.abs().as_f64() > RENORMALIZATION_WARN)
        .then(|| format!("amplitudes renormalized; 1 - sum |c|^2 = {:.3e}", raw_deficit.as_f64()));
    Ok(LoadedState { state: raw.normalized()?, raw_deficit, warning })
}

pub fn load_amplitudes<T: Real>(path: &Path, cutoff: Option<usize>) -> Result<LoadedState<T>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_amplitudes(&text, cutoff)
}
