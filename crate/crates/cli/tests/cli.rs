use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn irs_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irs-sim"))
        .args(args)
        .output()
        .expect("spawn irs-sim")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_SWEEP: &str = r#"
[system]
ap_antennas = 4
irs_elements = 16

[sweep]
variable = "transmit_power_db"
snr_reference = "distortion"
start = 0
stop = 20
steps = 3
scenarios = ["nonideal_mc", "nonideal_closed", "upper_bound"]
"#;

#[test]
fn sweep_writes_csv_manifest_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_SWEEP);
    let csv = dir.path().join("out.csv");
    let out = irs_sim(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        csv.to_str().unwrap(),
        "--seed",
        "5",
        "--trials",
        "300",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    let manifest = fs::read_to_string(dir.path().join("out.manifest.toml")).unwrap();
    assert!(manifest.starts_with("[manifest]"));
    assert!(manifest.contains("seed = 5"));
    assert!(manifest.contains("\"system.spacing_ratio\""));
    let gp = fs::read_to_string(dir.path().join("out.gp")).unwrap();
    assert!(gp.contains("'out.csv'"));
}

#[test]
fn manifest_reproduces_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_SWEEP);
    let first = dir.path().join("first.csv");
    let out = irs_sim(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        first.to_str().unwrap(),
        "--seed",
        "77",
        "--trials",
        "500",
    ]);
    assert!(out.status.success());
    let manifest = dir.path().join("first.manifest.toml");
    let again = irs_sim(&["sweep", "--config", manifest.to_str().unwrap()]);
    assert!(
        again.status.success(),
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    assert_eq!(again.stdout, fs::read(&first).unwrap());
}

#[test]
fn seeds_change_monte_carlo_rows_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL_SWEEP);
    let a = irs_sim(&["sweep", "--config", &cfg, "--seed", "1", "--trials", "200"]).stdout;
    let b = irs_sim(&["sweep", "--config", &cfg, "--seed", "2", "--trials", "200"]).stdout;
    let (a, b) = (String::from_utf8(a).unwrap(), String::from_utf8(b).unwrap());
    for (la, lb) in a.lines().zip(b.lines()) {
        if la.contains(",nonideal_mc,") {
            assert_ne!(la, lb);
        } else {
            assert_eq!(la, lb);
        }
    }
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[impairments]\ndelta_psi = 0.1\n");
    let out = irs_sim(&["optimal-power", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("line 2") && err.contains("delta_psi_deg"),
        "{err}"
    );

    let no_sweep = write(dir.path(), "plain.toml", "[system]\nap_antennas = 4\n");
    assert_eq!(
        irs_sim(&["sweep", "--config", &no_sweep]).status.code(),
        Some(2)
    );
    assert_eq!(
        irs_sim(&["sweep", "--config", "/nonexistent.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        irs_sim(&["validate", "--intensity", "extreme"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numeric_domain_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ideal.toml", "[impairments]\nsigma2 = 0\n");
    let out = irs_sim(&["optimal-power", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn out_of_range_angles_warn_unless_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "w.toml", "[system]\naod_ap_azimuth_deg = 400\n");
    let loud = irs_sim(&["optimal-power", "--config", &cfg]);
    assert!(loud.status.success());
    assert!(String::from_utf8_lossy(&loud.stderr).contains("warning"));
    let quiet = irs_sim(&["--quiet", "optimal-power", "--config", &cfg]);
    assert!(quiet.stderr.is_empty());
}

#[test]
fn optimal_power_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("opt.csv");
    let out = irs_sim(&["optimal-power", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("optimal power P* (W): 3.77288283093"));
    let table = fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("quantity,value\n"));
    assert!(table.contains("selected,p_c/(mu*W)"));
}

#[test]
fn validate_is_deterministic_and_catches_a_bad_sinc() {
    let a = irs_sim(&["validate", "--intensity", "quick", "--seed", "3"]);
    let b = irs_sim(&[
        "validate",
        "--intensity",
        "quick",
        "--seed",
        "3",
        "--threads",
        "2",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = irs_sim(&["validate", "--intensity", "quick", "--mutate-sinc"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.contains("[FAIL] identity"));
    assert!(text.contains("4 of 5 suites passed"));
}
