//! End-to-end CLI behavior: exit codes, config validation messages, report
//! schema, and output files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopbraid"))
}

fn run_config(dir: &Path, config: &str) -> Output {
    let config_path = dir.join("config.toml");
    std::fs::write(&config_path, config).unwrap();
    bin()
        .arg("run")
        .arg(&config_path)
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn full_rational_run_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(
        dir.path(),
        r#"
seed = 7
[spec]
ansatz = "rational"
c_const = "1"
[geometry]
n_sites = 3
[checks]
names = ["ybe", "rtt", "abcd", "transfer-commute", "charges", "hamiltonian", "spectrum"]
"#,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["seed"], 7);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 7);
    for check in checks {
        assert!(check["name"].is_string());
        assert!(check["residual"].is_number());
        assert!(check["status"].is_string());
    }
    // the Yang-Baxter entry names its convention
    let ybe = checks.iter().find(|c| c["name"] == "ybe").unwrap();
    assert_eq!(ybe["convention"], "standard-sum");
    // the closed-form entry reproduces the isotropic chain exactly
    let ham = checks.iter().find(|c| c["name"] == "hamiltonian").unwrap();
    assert_eq!(ham["status"], "pass");
    assert_eq!(report["hamiltonian"]["closed_form"], "xxx");
    assert_eq!(report["hamiltonian"]["hermitian"], true);

    let csv = std::fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,re,im"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn failing_asserted_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // wrong slope b(u) = -alpha u breaks the Yang-Baxter identity
    let out = run_config(
        dir.path(),
        r#"
seed = 3
[spec]
ansatz = "a3"
alpha = "1"
b_choice = "zz-half"
b_poly = ["0", "-1"]
[geometry]
n_sites = 3
[checks]
names = ["ybe"]
"#,
    );
    assert_eq!(code(&out), 2);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    let ybe = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "ybe")
        .unwrap();
    assert_eq!(ybe["status"], "fail");
}

#[test]
fn malformed_configs_exit_three_with_field_messages() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("not toml at all [", "config parse"),
        (
            "seed = 1\n[spec]\nansatz = \"warp\"\n[geometry]\nn_sites = 3\n[checks]\nnames = [\"ybe\"]\n",
            "unknown ansatz",
        ),
        (
            "seed = 1\n[spec]\nansatz = \"rational\"\nc_const = \"1\"\n[geometry]\nn_sites = 3\n[checks]\nnames = [\"warp-core\"]\n",
            "unknown check",
        ),
        (
            "seed = 1\n[spec]\nansatz = \"rational\"\n[geometry]\nn_sites = 3\n[checks]\nnames = [\"ybe\"]\n",
            "c_const",
        ),
        (
            "seed = 1\n[spec]\nansatz = \"rational\"\nc_const = \"1\"\n[geometry]\nn_sites = 3\n[checks]\nnames = [\"relations\"]\n",
            "braid-generator ansatz",
        ),
    ];
    for (config, needle) in cases {
        let out = run_config(dir.path(), config);
        assert_eq!(code(&out), 3, "config: {config}");
        let stderr = String::from_utf8_lossy(&out.stderr).to_lowercase();
        assert!(
            stderr.contains(&needle.to_lowercase()) || needle == "config parse",
            "stderr for {config}: {stderr}"
        );
    }
}

#[test]
fn alpha_minus_one_with_inverse_requiring_check_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(
        dir.path(),
        r#"
seed = 1
[spec]
ansatz = "a2"
alpha = "-1"
b_choice = "zz-half"
a_poly = ["0", "1"]
[geometry]
n_sites = 4
[checks]
names = ["relations"]
"#,
    );
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sigma^{-1}"), "{stderr}");
}

#[test]
fn unknown_flag_exits_three() {
    let out = bin().args(["check-ybe", "--warp-factor", "9"]).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn singular_r_matrix_exits_four() {
    // rational R(u0) = u0 I + s is singular at u0 = 1
    let out = bin()
        .args([
            "build-hamiltonian",
            "--ansatz",
            "rational",
            "--c-const",
            "1",
            "--u0",
            "1",
            "--n-sites",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    for sub in [
        "verify-relations",
        "check-ybe",
        "build-hamiltonian",
        "transfer-commute",
        "charges",
        "spectrum",
        "diagnose",
    ] {
        assert!(stdout.contains(sub), "missing {sub} in help");
    }
}

#[test]
fn custom_b_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    // zz-half written out as a custom matrix: accepted
    let good = dir.path().join("b_good.txt");
    std::fs::write(&good, "1 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 1\n").unwrap();
    let out = bin()
        .args([
            "verify-relations",
            "--n-sites",
            "4",
            "--alpha",
            "0.6",
            "--b-choice",
            &format!("custom:{}", good.display()),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("classification: SLB"));

    // (I - ZZ)/2 fails swap invariance: rejected at configuration level
    let bad = dir.path().join("b_bad.txt");
    std::fs::write(&bad, "0 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 0\n").unwrap();
    let out = bin()
        .args([
            "verify-relations",
            "--n-sites",
            "4",
            "--alpha",
            "0.6",
            "--b-choice",
            &format!("custom:{}", bad.display()),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("swap invariance"));
}

#[test]
fn relations_subcommand_prints_classification() {
    let out = bin()
        .args([
            "verify-relations",
            "--n-sites",
            "4",
            "--alpha",
            "0.6",
            "--b-choice",
            "zz-half",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("classification: SLB"));
    assert!(stdout.contains("relation-M3'"));
}

#[test]
fn spectrum_subcommand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("spectrum.csv");
    let out = bin()
        .args([
            "spectrum",
            "--ansatz",
            "a3",
            "--alpha",
            "0.5",
            "--b-choice",
            "zz-half",
            "--u0",
            "0",
            "--n-sites",
            "8",
            "--out",
        ])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 257); // header + 2^8 eigenvalues
}

#[test]
fn diagnose_reports_measured_entries_for_the_projector_model() {
    let out = bin()
        .args([
            "diagnose",
            "--ansatz",
            "a3",
            "--alpha",
            "0.5",
            "--b-choice",
            "product:0,0,0.5",
            "--u0",
            "0.3",
            "--n-sites",
            "4",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[MEAS] diagnostic-derived-commutator"));
    assert!(stdout.contains("[MEAS] discrepancy-hypothesis"));
}
