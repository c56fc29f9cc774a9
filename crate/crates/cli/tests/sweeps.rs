use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fs;
use std::process::Command;

use qdet_cli::{
    run, run_contrast_map, run_gain_vs_m, run_snr_table, run_verify, Format, GridValue,
    RunOptions, SweepConfig, Target,
};

fn config(target: Target, json: &str) -> SweepConfig {
    let mut cfg = SweepConfig::from_json(json).unwrap();
    assert_eq!(cfg.target, target);
    cfg = cfg.with_defaults();
    cfg.validate().unwrap();
    cfg
}

fn qdet(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qdet")).args(args).output().unwrap()
}

#[test]
fn contrast_map_threshold_row() {
    let cfg = config(
        Target::ContrastMap,
        &format!(r#"{{"target":"contrast_map","grids":{{"theta":[{FRAC_PI_2}],"f_T":[{FRAC_1_SQRT_2}]}}}}"#),
    );
    let ds = run_contrast_map(&cfg).unwrap();
    assert_eq!(ds.rows.len(), 1);
    assert!(ds.column("renormalized_contrast").unwrap()[0].abs() < 1e-12);
}

#[test]
fn contrast_map_small_noise_positive_and_monotone() {
    let cfg = config(Target::ContrastMap, r#"{"target":"contrast_map","grids":{"theta":[0.3],"f_T":[0.1]}}"#);
    assert!(run_contrast_map(&cfg).unwrap().column("renormalized_contrast").unwrap()[0] > 0.0);

    let ds = run_contrast_map(&SweepConfig::defaults(Target::ContrastMap)).unwrap();
    assert_eq!(ds.rows.len(), 2500);
    assert!(ds.warnings.is_empty());
    // theta-major: the first 50 rows share the smallest theta
    let rc = ds.column("renormalized_contrast").unwrap();
    let theta = ds.column("theta").unwrap();
    assert!(theta[..50].iter().all(|&t| t == theta[0]));
    for w in rc[..50].windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn contrast_map_sentinels() {
    let cfg = config(Target::ContrastMap, r#"{"target":"contrast_map","grids":{"theta":[0.0, 1.0],"f_T":[0.0]}}"#);
    let ds = run_contrast_map(&cfg).unwrap();
    let text = String::from_utf8(ds.to_bytes(Format::Csv).unwrap()).unwrap();
    assert!(text.contains("0.0,0.0,1.0,1,inf,nan,inf\n"), "{text}");
    assert!(text.contains("1.0,0.0,1.0,1,inf,1.0,"), "{text}");
    assert_eq!(ds.warnings.len(), 4);
}

#[test]
fn gain_vs_m_endpoints() {
    let cfg = config(Target::GainVsM, r#"{"target":"gain_vs_M","grids":{"M":[10],"k":[0,1]}}"#);
    let ds = run_gain_vs_m(&cfg).unwrap();
    let r = ds.column("R_formula").unwrap();
    assert_eq!(r, vec![10f64.sqrt(), 60f64.sqrt()]);
    let numeric = ds.column("R_numeric").unwrap();
    assert!((numeric[0] - 10f64.sqrt()).abs() < 1e-12);
    assert!((numeric[1] - 60f64.sqrt()).abs() < 1e-3 * 60f64.sqrt());
}

#[test]
fn gain_vs_m_clamps_odd_register() {
    let cfg = config(Target::GainVsM, r#"{"target":"gain_vs_M","grids":{"M":[5],"k":[1]}}"#);
    let ds = run_gain_vs_m(&cfg).unwrap();
    assert_eq!(ds.column("M_E").unwrap(), vec![4.0]);
    assert_eq!(ds.warnings.len(), 1);
}

#[test]
fn snr_ratios() {
    let opts = RunOptions::default();
    let cfg = config(
        Target::Snr,
        r#"{"target":"snr","grids":{"mode":["uncorrelated","giant_spin"],"M":[4,16]}}"#,
    );
    let ds = run_snr_table(&cfg, &opts).unwrap();
    let s1 = ds.column("SNR_1").unwrap();
    assert!((s1[1] / s1[0] - 2.0).abs() < 1e-12);
    assert!((s1[3] / s1[2] - 12.0 / 12f64.sqrt()).abs() < 1e-12);

    let cfg = config(
        Target::Snr,
        r#"{"target":"snr","grids":{"mode":["uncorrelated"],"M":[4],"N":[1,2,4,8]}}"#,
    );
    let s1 = run_snr_table(&cfg, &opts).unwrap().column("SNR_1").unwrap();
    assert!(s1[1..].iter().all(|&s| s < s1[0]));
}

#[test]
fn snr_nn_ising_resource_cap() {
    let cfg = config(
        Target::Snr,
        r#"{"target":"snr","grids":{"mode":["nn_ising"],"M":[10]},"fixed":{"lambda":0.02}}"#,
    );
    let err = run_snr_table(&cfg, &RunOptions { max_chain_qubits: 8 }).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    let r = run_snr_table(&cfg, &RunOptions::default()).unwrap().column("R").unwrap();
    assert!((r[0] - 10f64.sqrt()).abs() < 0.02 * 10f64.sqrt());
}

#[test]
fn verify_tolerance_and_exact_point() {
    let (_, report) = run_verify(&SweepConfig::defaults(Target::Verify)).unwrap();
    assert!(report.passed() && report.max_error < 1e-8);

    let mut strict = SweepConfig::defaults(Target::Verify);
    strict.set_fixed("tolerance", 1e-20);
    let (_, report) = run_verify(&strict).unwrap();
    assert_eq!(report.status().unwrap_err().exit_code(), 1);

    let cfg = config(
        Target::Verify,
        r#"{"target":"verify","grids":{"n":[0],"f_bar":[0],"theta":[0.1,2.0]}}"#,
    );
    let (ds, report) = run_verify(&cfg).unwrap();
    assert!(report.max_error < 1e-15);
    assert!(ds.column("abs_error").unwrap().iter().all(|&e| e < 1e-15));
}

#[test]
fn verify_cutoff_failures_are_per_point() {
    let cfg = config(
        Target::Verify,
        r#"{"target":"verify","grids":{"f_bar":[0.0, 1.0]},"fixed":{"cutoff":12}}"#,
    );
    let (ds, report) = run_verify(&cfg).unwrap();
    assert_eq!(ds.rows.len(), 2 * 5 * 3 * 3 * 2);
    assert_eq!(report.failures.len(), ds.rows.len() / 2);
    assert_eq!(report.status().unwrap_err().exit_code(), 3);
}

#[test]
fn round_trip_gives_identical_sweep() {
    let opts = RunOptions::default();
    for target in [Target::ContrastMap, Target::GainVsM, Target::Snr, Target::Verify] {
        let cfg = SweepConfig::defaults(target);
        let back = SweepConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        let a = run(&cfg, &opts).unwrap().dataset.to_bytes(Format::Csv).unwrap();
        let b = run(&back, &opts).unwrap().dataset.to_bytes(Format::Csv).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn grid_values_accept_strings_only_for_mode() {
    let mut cfg = SweepConfig::defaults(Target::ContrastMap);
    cfg.grids.insert("theta".into(), vec![GridValue::Text("pi".into())]);
    assert_eq!(run_contrast_map(&cfg).unwrap_err().exit_code(), 2);
}

#[test]
fn binary_exit_codes_and_outputs() {
    let ok = qdet(&["verify", "--photons", "0", "--f-bar", "0", "--theta", "0.5", "--eta", "1", "--n-guides", "1"]);
    assert!(ok.status.success());
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("n,theta,eta,N,f_bar,f_T,cutoff,"));

    assert_eq!(qdet(&["verify", "--tolerance", "1e-20"]).status.code(), Some(1));
    assert_eq!(qdet(&["gain-vs-m", "--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(
        qdet(&["snr-table", "--mode", "nn_ising", "--qubits", "16", "--lambda", "0.1"]).status.code(),
        Some(3)
    );
    let capped = Command::new(env!("CARGO_BIN_EXE_qdet"))
        .args(["snr-table", "--mode", "nn_ising", "--qubits", "8", "--lambda", "0.1"])
        .env("QDET_MAX_M", "6")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("c.json");
    fs::write(&cfg_path, r#"{"target":"snr","grids":{"M":[4]}}"#).unwrap();
    let mismatch = qdet(&["gain-vs-m", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn binary_config_output_path_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gain.json");
    let cfg_path = dir.path().join("c.json");
    fs::write(
        &cfg_path,
        format!(
            r#"{{"target":"gain_vs_M","grids":{{"M":[4,6]}},"fixed":{{"k":1}},"output":{{"path":{:?},"format":"json"}}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let status = qdet(&["gain-vs-m", "--config", cfg_path.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["M_E"], 6);
    assert_eq!(v[0]["r_source"], "dicke_ground_state");
}
