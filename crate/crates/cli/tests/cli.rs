use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimo-se"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn validate_reports_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = run(&["validate", "--seed", "42", "--quick"], a.path());
    let rb = run(&["validate", "--seed", "42", "--quick", "--workers", "3"], b.path());
    let report_a = std::fs::read(a.path().join("report.json")).unwrap();
    let report_b = std::fs::read(b.path().join("report.json")).unwrap();
    assert_eq!(report_a, report_b);
    assert_eq!(ra.stdout, rb.stdout);
    assert!(a.path().join("timings.json").exists());

    let checks: serde_json::Value = serde_json::from_slice(&report_a).unwrap();
    let checks = checks.as_array().unwrap();
    for c in checks {
        for key in ["check", "expected", "observed", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key} in {c}");
        }
    }
    let any_failed = checks.iter().any(|c| c["pass"] == false);
    assert_eq!(ra.status.success(), !any_failed);
    if any_failed {
        assert_eq!(ra.status.code(), Some(1));
    }
    let stdout = String::from_utf8(ra.stdout).unwrap();
    assert_eq!(stdout.lines().count(), checks.len());
    assert!(stdout.lines().all(|l| l.starts_with("PASS") || l.starts_with("FAIL")));
}

#[test]
fn sweep_csv_reruns_are_byte_identical() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (d, workers) in dirs.iter().zip(["1", "1", "4"]) {
        let r = run(
            &["sweep-pilot", "--pilots", "30:120:15", "--scenes", "40", "--antennas", "100", "--workers", workers],
            d.path(),
        );
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let csv: Vec<Vec<u8>> = dirs.iter().map(|d| std::fs::read(d.path().join("sweep_pilot_M100.csv")).unwrap()).collect();
    assert_eq!(csv[0], csv[1]);
    assert_eq!(csv[0], csv[2]);
    let text = String::from_utf8(csv[0].clone()).unwrap();
    assert!(text.starts_with("axis,se_bound,se_mc_mean,se_mc_ci,se_limit,se_pts,config_hash\n"));
    assert_eq!(text.lines().count(), 1 + 7);
    assert!(!text.contains('\r'));
}

#[test]
fn config_file_and_overrides() {
    let d = tempfile::tempdir().unwrap();
    let cfg_path = d.path().join("cfg.toml");
    let cfg = mimo_se::Config::reference().with_antennas(64).with_activity(0.5);
    std::fs::write(&cfg_path, cfg.to_toml_string()).unwrap();
    let r = run(&["analytic", "--config", cfg_path.to_str().unwrap(), "--snr-db", "10"], d.path());
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&std::fs::read(d.path().join("analytic.json")).unwrap()).unwrap();
    let row = &rows[0];
    assert_eq!(row["antennas"], 64);
    assert_eq!(row["config"]["A"], 0.5);
    let rho = row["config"]["rho"].as_f64().unwrap();
    assert!((rho - 10.0).abs() < 1e-12);
}

#[test]
fn optimize_b_prints_the_lambert_optimum() {
    let d = tempfile::tempdir().unwrap();
    let r = run(&["optimize-b", "--activity", "0.5"], d.path());
    assert!(r.status.success());
    let stdout = String::from_utf8(r.stdout).unwrap();
    assert!(stdout.contains("integer 97"), "{stdout}");
}

#[test]
fn invalid_config_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let r = run(&["analytic", "--activity", "1.5"], d.path());
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("A not in [0, 1]"));
}
