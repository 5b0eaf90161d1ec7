mod common;

use bnl_core::indicators::gram::{gram_certificate, gram_certificate_ensemble, gram_matrix};
use bnl_core::indicators::mermin::{lhv_bound_oracle, mermin_bell_value, mermin_expression, mermin_value, MerminVariant};
use bnl_core::indicators::ns_family::ns_condition_family;
use bnl_core::indicators::peres_mermin::*;
use bnl_core::indicators::witness::{map_witness, witness_expectation, witness_expectation_ensemble, witness_verdict, WitnessSpec};
use bnl_core::states::*;
use bnl_core::{BeamSpace, ComplexOperator, Domain, ModeOccupation, MultiBeamState, Verdict};
use common::*;

fn occ(a: usize, b: usize) -> ModeOccupation {
    ModeOccupation::new(a, b)
}

fn bsv(gamma: f64, cutoff: usize) -> MultiBeamState<f64> {
    bsv_state(BsvParams { gamma, cutoff }).unwrap()
}

#[test]
fn square_lines_commute_and_multiply_to_g0g0() {
    for c in [1, 3, 5] {
        let sq = PeresMerminSquare::<f64>::new(&BeamSpace::new(c), &BeamSpace::new(c)).unwrap();
        assert!(sq.commutator_residual() < 1e-12);
        assert!(sq.line_product_residual().unwrap() < 1e-12);
    }
}

#[test]
fn pm_examples() {
    let st = bsv(1.0, 40);
    let v = pm_expectation(&st).unwrap();
    // ‖O‖ = 6, so truncation moves ⟨O⟩ by at most 6δ
    assert!((v.value - (6.0 - 6.0 * sech(2.0))).abs() < 1e-10 + 6.0 * st.norm_deficit());
    assert!((v.value - 4.40519).abs() < 1e-5);

    let d = MultiBeamState::<f64>::basis(Domain::uniform(2, 2), &[occ(1, 1), occ(1, 1)]).unwrap();
    assert_eq!(pm_expectation(&d).unwrap().value, 0.0);
    assert!(pm_expectation(&random_pure::<f64>(1, 3, 1)).is_err());
}

#[test]
fn pm_by_cells_agrees_with_assembled_operator() {
    let st = random_pure::<f64>(9, 2, 3);
    let sq = PeresMerminSquare::for_domain(st.domain()).unwrap();
    let a = sq.evaluate(&st).unwrap().value;
    let b = pm_value_by_cells(&sq, &st).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn contextuality_examples() {
    let half = contextuality_verdict(&bsv(0.5, 40)).unwrap();
    assert_eq!(half.verdict, Verdict::NotViolated);
    let st = bsv(1.0, 40);
    let one = contextuality_verdict(&st).unwrap();
    assert_eq!(one.verdict, Verdict::Violated);
    assert!((one.margin - (2.0 - 6.0 * sech(2.0))).abs() < 1e-10 + 6.0 * st.norm_deficit());
    assert!(one.interval[0] <= one.value && one.value <= one.interval[1]);
    let t: f64 = bsv_contextuality_threshold();
    assert!((t - 0.881374).abs() < 1e-6);
    assert!((sech(2.0 * t) - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn coarse_truncation_is_inconclusive_near_threshold() {
    let st = bsv(0.9, 6);
    assert!(st.norm_deficit() > 0.01);
    assert_eq!(contextuality_verdict(&st).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn nchv_oracle() {
    assert_eq!(nchv_bound_oracle(), 4);
    assert_eq!(nchv_bound_over(&[-1, 1]), 4);
    assert_eq!(nchv_bound_over(&[0]), 0);
}

#[test]
fn witness_examples() {
    let d2 = Domain::uniform(2, 2);
    let id = map_witness(&WitnessSpec::<f64>::identity(2).unwrap(), &d2).unwrap();
    let s = BeamSpace::new(2);
    let g0 = bnl_core::gpauli::g::<f64>(0, &s);
    assert_eq!(id.max_abs_diff(&g0.kron(&g0)), 0.0);
    assert!(id.is_hermitian());

    let coeffs = BghzCoefficients::new(vec![cx(0.7, 0.0), cx(0.5, 0.1), cx(0.2, 0.0)]).unwrap();
    let st = bghz_state(&coeffs, coeffs.max_photons()).unwrap();
    let w = witness_expectation(&WitnessSpec::bghz(), &st).unwrap();
    let g000 = witness_expectation(&WitnessSpec::identity(3).unwrap(), &st).unwrap();
    assert!((w + g000).abs() < 1e-12 && w < 0.0);
    assert_eq!(witness_verdict(&WitnessSpec::bghz(), &st).unwrap().verdict, Verdict::Violated);

    assert!(WitnessSpec::<f64>::new(2, [(vec![0, 4], 1.0)]).is_err());
    assert!(WitnessSpec::<f64>::new(2, [(vec![0, 0], 0.0)]).is_err());
    assert!(witness_expectation(&WitnessSpec::bghz(), &bsv(0.3, 4)).is_err());
}

#[test]
fn witness_on_ensembles_is_weighted_average() {
    let a = random_separable::<f64>(1, 2, 3, 2).unwrap();
    let b = random_pure::<f64>(2, 2, 3);
    let spec = WitnessSpec::singlet();
    let ens = EnsembleState::new(vec![(0.25, a.clone()), (0.75, b.clone())]).unwrap();
    let avg = 0.25 * witness_expectation(&spec, &a).unwrap() + 0.75 * witness_expectation(&spec, &b).unwrap();
    assert!((witness_expectation_ensemble(&spec, &ens).unwrap() - avg).abs() < 1e-14);
    assert!(EnsembleState::new(vec![(0.5, a)]).is_err());
}

#[test]
fn gram_examples() {
    let st = bsv(1.0, 40);
    let cert = gram_certificate(&st).unwrap();
    assert!((cert.trace - (1.0 - sech(2.0))).abs() < 1e-10 + st.norm_deficit());
    assert!(cert.is_psd(1e-10));

    let diag = MultiBeamState::<f64>::basis(Domain::uniform(2, 3), &[occ(1, 1), occ(2, 1)]).unwrap();
    assert!(matches!(gram_certificate(&diag), Err(bnl_core::Error::DegenerateCertificate)));
}

#[test]
fn gram_of_mixture() {
    let a = random_pure::<f64>(5, 2, 2);
    let b = random_pure::<f64>(6, 2, 2);
    let ens = EnsembleState::new(vec![(0.4, a.clone()), (0.6, b.clone())]).unwrap();
    let cert = gram_certificate_ensemble(&ens).unwrap();
    let ma = to_na(&gram_matrix(&a));
    let mb = to_na(&gram_matrix(&b));
    let m = ma * cx(0.4, 0.0) + mb * cx(0.6, 0.0);
    let tr = m.trace().re;
    assert!(max_abs(&(to_na(&cert.normalized) - m / cx(tr, 0.0))) < 1e-14);
}

#[test]
fn ns_family_on_bsv() {
    let r = ns_condition_family(&bsv(1.0, 40)).unwrap();
    assert_eq!(r.members.len(), 9);
    let first = r.members.iter().find(|m| m.shift_party1 == 0 && m.shift_party2 == 0).unwrap();
    let expected = 16.0 * sech(2.0).powi(4) * 1f64.sinh().powi(4);
    assert!((first.lhs_first.powi(2) - expected).abs() < 1e-10 + 1e-8);
    assert!((expected - 0.152336).abs() < 1e-6);
    assert!(r.detected);
    assert!(ns_condition_family(&bsv(0.3, 30)).unwrap().detected);
}

#[test]
fn ns_family_never_fires_on_product_states() {
    for seed in 0..50 {
        let st = random_separable::<f64>(seed, 2, 3, 3).unwrap();
        let r = ns_condition_family(&st).unwrap();
        assert!(!r.detected, "seed {seed}");
    }
}

#[test]
fn mermin_examples() {
    let st = bghz_state(&BghzCoefficients::new(vec![cx(1.0, 0.0), cx(1.0, 0.0)]).unwrap(), 2).unwrap();
    let e = mermin_bell_value(&st).unwrap();
    assert!((e.p_diag - 0.5).abs() < 1e-15);
    assert!((e.value - 3.0).abs() < 1e-12);
    assert_eq!(e.structured_prediction, Some(3.0));
    assert_eq!(e.verdict, Verdict::Violated);

    let u = mermin_value(&st, MerminVariant::Unmodified).unwrap();
    assert!((u.value - 2.0).abs() < 1e-12);
    assert_eq!(u.verdict, Verdict::NotViolated);

    let prod = MultiBeamState::<f64>::basis(Domain::uniform(3, 1), &[occ(1, 0); 3]).unwrap();
    let p = mermin_bell_value(&prod).unwrap();
    assert!(p.value.abs() <= 2.0);
    assert_eq!(p.verdict, Verdict::NotViolated);
}

#[test]
fn lhv_oracle() {
    assert_eq!(lhv_bound_oracle(), 2);
    assert_eq!(mermin_expression(&[[1, 1]; 3]), -2);
}

#[test]
fn unmodified_mermin_crosses_bound_at_half() {
    // 4 − 4P(d) > 2 exactly when P(d) < 1/2
    let pair = BghzCoefficients::new(vec![cx(1.0, 0.0), cx(0.5, 0.0)]).unwrap();
    for (st, above) in [(psi_nm_state(2, 1, 3).unwrap(), true), (bghz_state(&pair, 2).unwrap(), false)] {
        let u = mermin_value(&st, MerminVariant::Unmodified).unwrap();
        assert!((u.value - (4.0 - 4.0 * u.p_diag)).abs() < 1e-12);
        assert_eq!(u.value > 2.0, above);
        assert_eq!(u.p_diag < 0.5, above);
    }
}

#[test]
fn map_witness_rejects_party_mismatch() {
    let d = Domain::uniform(3, 1);
    assert!(map_witness(&WitnessSpec::<f64>::singlet(), &d).is_err());
    let _ = ComplexOperator::<f64>::zero(d);
}
