//! End-to-end runs of the `bnl` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnl")).args(args).env_remove("BNL_MAX_DIM").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn coeffs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/bghz_coeffs.csv")
}

/// Parses `gamma,p_diag,pm_value,margin,lo,hi,verdict` rows.
fn pm_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,p_diag,pm_value,margin,lo,hi,verdict"));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn bsv_unit_gain_matches_closed_form() {
    let o = bnl(&["contextuality", "bsv", "--gamma", "1.0"]);
    assert!(o.status.success());
    let rows = pm_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let value: f64 = rows[0][2].parse().unwrap();
    // 6 − 6 P(d), where only the n = m kets are diagonal: P(d) = sech⁴Γ Σ tanh⁴ⁿΓ.
    let (s, t) = (1.0f64 / 1.0f64.cosh(), 1.0f64.tanh());
    let p = s.powi(4) / (1.0 - t.powi(4));
    assert!((value - (6.0 - 6.0 * p)).abs() < 1e-6, "{value}");
    assert!((value - 4.40519).abs() < 1e-5);
    assert_eq!(rows[0][6], "violated");
}

#[test]
fn singlet_reaches_six() {
    let o = bnl(&["contextuality", "qubit", "--bell-state", "singlet"]);
    let rows = pm_rows(&stdout(&o));
    assert_eq!(rows[0][0], "");
    assert!((rows[0][2].parse::<f64>().unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn sweep_flips_between_085_and_090() {
    let o = bnl(&["contextuality", "bsv", "--gamma-min", "0", "--gamma-max", "1.2", "--steps", "25"]);
    assert!(o.status.success());
    let rows = pm_rows(&stdout(&o));
    assert_eq!(rows.len(), 25);
    let verdict = |g: &str| rows.iter().find(|r| r[0] == g).map(|r| r[6].clone()).unwrap();
    assert_eq!(verdict("0.85"), "not_violated");
    assert_eq!(verdict("0.9"), "violated");
    let values: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "monotone in the gain");
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let args = ["contextuality", "bsv", "--gamma-min", "0.1", "--gamma-max", "1.1", "--steps", "11", "--cutoff", "20"];
    let (a, b) = (bnl(&args), bnl(&args));
    assert_eq!(a.stdout, b.stdout);
    let gammas: Vec<f64> = pm_rows(&stdout(&a)).iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(gammas.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn contextuality_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pm.json");
    let o = bnl(&["contextuality", "qubit", "--bell-state", "phi+", "--json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["pm_value"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert_eq!(v["record"]["verdict"], "violated");
}

#[test]
fn ns_family_detects_weak_bsv() {
    let o = bnl(&["entanglement", "ns-family", "bsv", "--gamma", "0.3"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["report"]["detected"], true);
    assert_eq!(v["report"]["members"].as_array().unwrap().len(), 9);
}

#[test]
fn ns_family_silent_on_product_state() {
    let v = json(&bnl(&["entanglement", "ns-family", "product-state", "--seed", "4"]));
    assert_eq!(v["report"]["detected"], false);
    assert_eq!(v["interpretation"], "no detection");
}

#[test]
fn gram_of_phi_plus_is_the_bell_projector() {
    let v = json(&bnl(&["entanglement", "gram", "qubit", "--bell-state", "phi+"]));
    assert_eq!(v["psd"], true);
    let rows = v["normalized"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let expect = if (i == 0 || i == 3) && (j == 0 || j == 3) { 0.5 } else { 0.0 };
            assert!((z[0].as_f64().unwrap() - expect).abs() < 1e-12, "({i},{j})");
            assert!(z[1].as_f64().unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn witness_flags_singlet_and_not_product() {
    let v = json(&bnl(&["entanglement", "witness", "qubit", "--bell-state", "singlet"]));
    assert_eq!(v["interpretation"], "entangled");
    assert!(v["record"]["value"].as_f64().unwrap() < 0.0);
    let v = json(&bnl(&["entanglement", "witness", "product-state", "--seed", "2"]));
    assert_ne!(v["interpretation"], "entangled");
}

#[test]
fn witness_party_mismatch_is_usage_error() {
    let o = bnl(&["entanglement", "witness", "qubit", "--bell-state", "singlet", "--witness", "bghz"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bell_ghz_qubits_reach_four() {
    let v = json(&bnl(&["bell", "qubit", "--ghz"]));
    assert!((v["evaluation"]["value"].as_f64().unwrap().abs() - 4.0).abs() < 1e-12);
    assert_eq!(v["record"]["verdict"], "violated");
}

#[test]
fn bell_product_state_respects_lhv_bound() {
    for seed in ["0", "1", "7"] {
        let v = json(&bnl(&["bell", "product-state", "--seed", seed]));
        assert!(v["evaluation"]["value"].as_f64().unwrap().abs() <= 2.0 + 1e-12, "seed {seed}");
    }
}

#[test]
fn bell_bghz_matches_structured_prediction() {
    let o = bnl(&["bell", "bghz", "--coeffs", coeffs().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let e = &v["evaluation"];
    let p = e["p_diag"].as_f64().unwrap();
    assert!((e["value"].as_f64().unwrap() - (4.0 - 2.0 * p)).abs() < 1e-10);
    assert_eq!(v["non_authoritative"], false);
}

#[test]
fn bghz_without_coeffs_is_usage_error() {
    assert_eq!(bnl(&["bell", "bghz"]).status.code(), Some(1));
}

#[test]
fn generator_sweep_is_labelled() {
    let o = bnl(&["bell", "generator", "--gamma-min", "0", "--gamma-max", "0.4", "--steps", "3", "--cutoff", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with('#'));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn generator_respects_dimension_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_bnl"))
        .args(["bell", "generator", "--cutoff", "12"])
        .env("BNL_MAX_DIM", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_bnl"))
        .args(["bell", "generator"])
        .env("BNL_MAX_DIM", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn counterexample_default_and_sign_flip() {
    for extra in [&[][..], &["--sign-flip"][..]] {
        let mut args = vec!["counterexample"];
        args.extend_from_slice(extra);
        let o = bnl(&args);
        assert!(o.status.success());
        let v = json(&o);
        assert!(v["g_distance"].as_f64().unwrap() > 0.5);
        assert!(v["stokes_distance"].as_f64().unwrap() < 1e-12);
        assert!(v["explicit_matrix_distance"].as_f64().unwrap() < 1e-12);
        assert_eq!(v["g_non_equivalent"], true);
    }
}

#[test]
fn counterexample_single_photon_block_agrees() {
    let o = bnl(&["counterexample", "--block", "1"]);
    assert!(o.status.success());
    assert!(json(&o)["g_distance"].as_f64().unwrap() < 1e-12);
    assert_eq!(bnl(&["counterexample", "--block", "0"]).status.code(), Some(1));
}

#[test]
fn verify_algebra_passes_and_fault_exits_two() {
    let o = bnl(&["verify-algebra", "--cutoff", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
    let o = bnl(&["verify-algebra", "--cutoff", "5", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["frobnicate"][..],
        &["contextuality"][..],
        &["contextuality", "bsv", "--gamma-min", "0"][..],
        &["contextuality", "bsv", "--gamma-min", "1", "--gamma-max", "0", "--steps", "3"][..],
        &["contextuality", "qubit", "--gamma-min", "0", "--gamma-max", "1", "--steps", "3"][..],
        &["verify-algebra", "--cutoff", "1000"][..],
        &["contextuality", "bsv", "--json", "--csv"][..],
    ] {
        assert_eq!(bnl(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(bnl(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_and_missing_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1,0,0,1,0.7\n").unwrap();
    let o = bnl(&["contextuality", "file", "--state", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let missing = dir.path().join("nope.txt");
    assert_eq!(bnl(&["contextuality", "file", "--state", missing.to_str().unwrap()]).status.code(), Some(3));
    let bad_coeffs = dir.path().join("c.csv");
    std::fs::write(&bad_coeffs, "0,one,0\n").unwrap();
    assert_eq!(bnl(&["bell", "bghz", "--coeffs", bad_coeffs.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn file_source_renormalizes_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("singlet.txt");
    std::fs::write(&f, "# unnormalized singlet\n1,0,0,1,1,0\n0,1,1,0,-1,0\n").unwrap();
    let o = bnl(&["contextuality", "file", "--state", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("renormalized"));
    let rows = pm_rows(&stdout(&o));
    assert!((rows[0][2].parse::<f64>().unwrap() - 6.0).abs() < 1e-12);
}
