//! One function per subcommand. Each renders its result and routes it to
//! stdout or `--out`.

use std::fmt::Write as _;

use bnl_core::gpauli::verify_algebra_set;
use bnl_core::indicators::gram::gram_certificate;
use bnl_core::indicators::mermin::mermin_bell_value;
use bnl_core::indicators::ns_family::ns_condition_family;
use bnl_core::indicators::peres_mermin::PmEvaluation;
use bnl_core::indicators::witness::witness_verdict;
use bnl_core::{counterexample_report, prob_diagonal, BeamSpace, Domain, GSet, Square, Verdict, VerdictRecord, Witness};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::source::StateArgs;
use crate::{EntanglementTest, Failure, OutArgs, SourceKind, SweepArgs, WitnessKind};

/// Largest cutoff `verify-algebra` accepts; the spectrum check is dense per block.
pub const MAX_VERIFY_CUTOFF: usize = 60;

const PM_HEADER: &str = "gamma,p_diag,pm_value,margin,lo,hi,verdict";
const RECORD_HEADER: &str = "quantity,value,bound,margin,lo,hi,verdict";

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values always serialize");
    s.push('\n');
    s
}

fn record_row(r: &VerdictRecord) -> String {
    format!("{},{},{},{},{},{},{}\n", r.quantity, r.value, r.bound, r.margin, r.interval[0], r.interval[1], r.verdict.as_str())
}

/// Evenly spaced gains, inclusive at both ends.
fn gains(sweep: &SweepArgs) -> Result<Option<Vec<f64>>, Failure> {
    let (Some(lo), Some(hi), Some(steps)) = (sweep.gamma_min, sweep.gamma_max, sweep.steps) else {
        return Ok(None);
    };
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
        return Err(Failure::Usage(format!("need 0 <= --gamma-min <= --gamma-max, got {lo} and {hi}")));
    }
    if steps == 0 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    if steps == 1 {
        return Ok(Some(vec![lo]));
    }
    // Snapping to 1e-12 keeps decimal grids such as 0.8 from printing as 0.7999999999999999.
    let n = (steps - 1) as f64;
    let snap = |x: f64| (x * 1e12).round() / 1e12;
    Ok(Some((0..steps).map(|k| snap((lo * (n - k as f64) + hi * k as f64) / n)).collect()))
}

pub fn verify_algebra(cutoff: usize, inject_fault: bool, out: &OutArgs) -> Result<(), Failure> {
    if cutoff > MAX_VERIFY_CUTOFF {
        return Err(Failure::Usage(format!("cutoff {cutoff} exceeds the supported maximum {MAX_VERIFY_CUTOFF}")));
    }
    let space = BeamSpace::new(cutoff);
    let mut set = GSet::<f64>::direct(&space);
    if inject_fault {
        if space.dim() < 3 {
            return Err(Failure::Usage("fault injection needs cutoff >= 1".into()));
        }
        set.ops[1].corrupt_entry(1, 2, Complex64::new(-1.0, 0.0));
    }
    let report = verify_algebra_set(&set, &space);
    let passed = report.passed();
    let text = if out.csv {
        let mut s = String::from("relation,residual\n");
        for d in &report.details {
            let _ = writeln!(s, "{},{}", d.relation, d.residual);
        }
        s
    } else {
        pretty(&json!({ "passed": passed, "report": report }))
    };
    emit(out, &text)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!("operator identities fail at cutoff {cutoff}")))
    }
}

fn pm_json(gamma: Option<f64>, e: &PmEvaluation<f64>) -> Value {
    json!({
        "gamma": gamma,
        "p_diag": e.p_diag.value,
        "pm_value": e.value,
        "shortcut": e.shortcut,
        "record": e.record(),
    })
}

fn pm_row(gamma: Option<f64>, e: &PmEvaluation<f64>) -> String {
    let g = gamma.map(|g| g.to_string()).unwrap_or_default();
    format!("{g},{},{},{},{},{},{}\n", e.p_diag.value, e.value, e.margin(), e.lo, e.hi, e.verdict().as_str())
}

pub fn contextuality(source: SourceKind, args: &StateArgs, sweep: &SweepArgs, out: &OutArgs) -> Result<(), Failure> {
    let rows: Vec<(Option<f64>, PmEvaluation<f64>)> = match gains(sweep)? {
        Some(gammas) => {
            if source != SourceKind::Bsv {
                return Err(Failure::Usage("a gain sweep needs the bsv source".into()));
            }
            let cutoff = args.cutoff.unwrap_or(40);
            let square = Square::for_domain(&Domain::uniform(2, cutoff))?;
            gammas
                .par_iter()
                .map(|&g| {
                    let built = args.build_at(source, g, 2)?;
                    Ok((Some(g), square.evaluate(&built.state)?))
                })
                .collect::<Result<_, Failure>>()?
        }
        None => {
            let built = args.build(source, 2)?;
            let square = Square::for_domain(built.state.domain())?;
            let gamma = (source == SourceKind::Bsv).then_some(args.gamma);
            vec![(gamma, square.evaluate(&built.state)?)]
        }
    };
    let text = if out.json {
        let items: Vec<Value> = rows.iter().map(|(g, e)| pm_json(*g, e)).collect();
        pretty(&if items.len() == 1 && sweep.steps.is_none() { items[0].clone() } else { Value::Array(items) })
    } else {
        let mut s = format!("{PM_HEADER}\n");
        for (g, e) in &rows {
            s.push_str(&pm_row(*g, e));
        }
        s
    };
    emit(out, &text)
}

fn interpretation(v: Verdict) -> &'static str {
    match v {
        Verdict::Violated => "entangled",
        Verdict::NotViolated => "no detection",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn entanglement(
    test: EntanglementTest,
    source: SourceKind,
    args: &StateArgs,
    witness: Option<WitnessKind>,
    out: &OutArgs,
) -> Result<(), Failure> {
    let built = args.build(source, 2)?;
    let state = &built.state;
    let text = match test {
        EntanglementTest::Witness => {
            let kind = witness.unwrap_or(if state.domain().n_beams() == 3 { WitnessKind::Bghz } else { WitnessKind::Singlet });
            let (spec, name) = match kind {
                WitnessKind::Bghz => (Witness::bghz(), "bghz"),
                WitnessKind::Singlet => (Witness::singlet(), "singlet"),
                WitnessKind::PhiPlus => (Witness::phi_plus(), "phi-plus"),
            };
            if spec.n_parties() != state.domain().n_beams() {
                return Err(Failure::Usage(format!(
                    "{name} witness acts on {} beams, the state has {}",
                    spec.n_parties(),
                    state.domain().n_beams()
                )));
            }
            let record = witness_verdict(&spec, state)?;
            if out.csv {
                format!("{RECORD_HEADER}\n{}", record_row(&record))
            } else {
                pretty(&json!({
                    "source": built.label,
                    "witness": name,
                    "interpretation": interpretation(record.verdict),
                    "record": record,
                }))
            }
        }
        EntanglementTest::NsFamily => {
            let report = ns_condition_family(state)?;
            if out.csv {
                let mut s = String::from("shift_party1,shift_party2,lhs_first,lhs_second,rhs,lhs_squared,rhs_squared,verdict\n");
                for m in &report.members {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{}",
                        m.shift_party1,
                        m.shift_party2,
                        m.lhs_first,
                        m.lhs_second,
                        m.rhs,
                        m.lhs_squared,
                        m.rhs_squared,
                        m.verdict.as_str()
                    );
                }
                s
            } else {
                pretty(&json!({
                    "source": built.label,
                    "interpretation": if report.detected { "entangled" } else { "no detection" },
                    "report": report,
                }))
            }
        }
        EntanglementTest::Gram => {
            let cert = gram_certificate(state)?;
            let psd = cert.is_psd(1e-12);
            if out.csv {
                let mut s = String::from("row,col,re,im\n");
                let n = cert.normalized.rows();
                for i in 0..n {
                    for j in 0..n {
                        let z = cert.normalized[(i, j)];
                        let _ = writeln!(s, "{i},{j},{},{}", z.re, z.im);
                    }
                }
                s
            } else {
                pretty(&json!({
                    "source": built.label,
                    "trace": cert.trace,
                    "min_eigenvalue": cert.min_eigenvalue,
                    "psd": psd,
                    "normalized": cert.normalized.to_report(),
                }))
            }
        }
    };
    emit(out, &text)
}

const MERMIN_HEADER: &str = "gamma,p_diag,mermin_value,lo,hi,structured_prediction,verdict";

pub fn bell(source: SourceKind, args: &StateArgs, sweep: &SweepArgs, out: &OutArgs) -> Result<(), Failure> {
    if let Some(gammas) = gains(sweep)? {
        if source != SourceKind::Generator {
            return Err(Failure::Usage("a gain sweep needs the generator source".into()));
        }
        let rows = gammas
            .par_iter()
            .map(|&g| {
                let built = args.build_at(source, g, 3)?;
                Ok((g, mermin_bell_value(&built.state)?))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let text = if out.json {
            let items: Vec<Value> = rows
                .iter()
                .map(|(g, e)| json!({ "gamma": g, "evaluation": e, "record": e.record() }))
                .collect();
            pretty(&json!({ "non_authoritative": true, "rows": items }))
        } else {
            let mut s = String::from("# generator sweep: truncated propagator, qualitative only\n");
            s.push_str(MERMIN_HEADER);
            s.push('\n');
            for (g, e) in &rows {
                let pred = e.structured_prediction.map(|p| p.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{g},{},{},{},{},{pred},{}", e.p_diag, e.value, e.lo, e.hi, e.verdict.as_str());
            }
            s
        };
        return emit(out, &text);
    }
    let built = args.build(source, 3)?;
    if built.non_authoritative {
        eprintln!("note: generator states are truncated; treat the result as qualitative");
    }
    let eval = mermin_bell_value(&built.state)?;
    let record = eval.record();
    let text = if out.csv {
        format!("{RECORD_HEADER}\n{}", record_row(&record))
    } else {
        pretty(&json!({
            "source": built.label,
            "non_authoritative": built.non_authoritative,
            "p_diag": prob_diagonal(&built.state).value,
            "evaluation": eval,
            "record": record,
        }))
    };
    emit(out, &text)
}

pub fn counterexample(sign_flip: bool, block: usize, out: &OutArgs) -> Result<(), Failure> {
    let report = counterexample_report(sign_flip, block)?;
    emit(out, &pretty(&json!(report)))?;
    let ok = if block == 1 {
        report.g_distance < 1e-12 && report.stokes_covariant
    } else {
        report.g_distance > 0.5 && report.stokes_covariant
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("rotated-mode checks did not come out as expected on block {block}")))
    }
}
