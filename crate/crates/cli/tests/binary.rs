// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn optomech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optomech"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&optomech(&[])), 1);
    assert_eq!(code(&optomech(&["frobnicate"])), 1);
    assert_eq!(code(&optomech(&["entangle-sweep", "--config", "x.cfg"])), 1);
    let cfg = config("detuning_eta004.cfg");
    let args = ["entangle-sweep", "--config", &cfg, "--var", "delta_a", "--from", "0.5", "--to", "1.5"];
    assert_eq!(code(&optomech(&[&args[..], &["--points", "1"]].concat())), 1);
    assert_eq!(code(&optomech(&[&args[..4], &["--var", "kappa", "--from", "0", "--to", "1"]].concat())), 1);
}

#[test]
fn help_and_version_exit_with_zero() {
    let help = optomech(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("entangle-sweep"));
    assert_eq!(code(&optomech(&["--version"])), 0);
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.cfg");
    let out = optomech(&["steady", "--config", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.cfg"));

    let bad = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(config("detuning_eta004.cfg")).unwrap() + "effective.etaa = 1\n";
    std::fs::write(&bad, text).unwrap();
    let out = optomech(&["steady", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn selftest_exit_codes() {
    let ok = optomech(&["selftest"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    let report = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(report.lines().filter(|l| l.starts_with("PASS")).count(), 6);

    let drift = optomech(&["selftest", "--fault", "perturb-drift"]);
    assert_eq!(code(&drift), 2);
    assert!(String::from_utf8_lossy(&drift.stdout).contains("FAIL jacobian"));

    let diffusion = optomech(&["selftest", "--fault", "flip-diffusion"]);
    assert_eq!(code(&diffusion), 2);
    assert!(String::from_utf8_lossy(&diffusion.stdout).contains("FAIL lyapunov"));
}

fn sweep_to(dir: &Path, name: &str, jobs: &str, format: &str) -> Vec<u8> {
    let out = dir.join(name);
    let cfg = config("temperature_1p2K.cfg");
    let status = optomech(&[
        "entangle-sweep", "--config", &cfg, "--var", "delta_a", "--from", "0.5", "--to", "1.5", "--points", "101",
        "--jobs", jobs, "--format", format, "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&status), 0, "{}", String::from_utf8_lossy(&status.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = sweep_to(dir.path(), "a.csv", "1", "csv");
    assert_eq!(first, sweep_to(dir.path(), "b.csv", "1", "csv"));
    assert_eq!(first, sweep_to(dir.path(), "c.csv", "4", "csv"));
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().count(), 102);
    assert!(text.starts_with("delta_a,E_N_am,E_N_fa,E_N_mf,stable,"));
    assert_eq!(
        sweep_to(dir.path(), "a.json", "1", "json"),
        sweep_to(dir.path(), "b.json", "3", "json")
    );
}

#[test]
fn spectrum_writes_table_and_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let status = optomech(&["spectrum", "--config", &config("spectrum_eta004.cfg"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&status), 0, "{}", String::from_utf8_lossy(&status.stderr));
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("omega_over_omega_m,S_q\n"));
    assert_eq!(table.lines().count(), 2002);
    let peaks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.csv.peaks.json")).unwrap()).unwrap();
    assert_eq!(peaks["structure"], "three-mode");
    assert_eq!(peaks["mode_count"], 2);

    let coarse = optomech(&["spectrum", "--config", &config("spectrum_eta004.cfg"), "--points", "101"]);
    assert_eq!(code(&coarse), 1);
}

#[test]
fn steady_and_map_and_ftable() {
    let steady = optomech(&["steady", "--config", &config("detuning_eta004.cfg")]);
    assert_eq!(code(&steady), 0);
    let doc: serde_json::Value = serde_json::from_slice(&steady.stdout).unwrap();
    assert_eq!(doc["stable"], true);
    assert_eq!(doc["alpha_s"][0], 332.7);

    let map = optomech(&[
        "stability-map", "--config", &config("detuning_eta008.cfg"), "--from", "0.5", "--to", "1.5", "--points", "3",
        "--var", "field-amplitude", "--drive-from", "100", "--drive-to", "332.7", "--drive-points", "2",
    ]);
    assert_eq!(code(&map), 0, "{}", String::from_utf8_lossy(&map.stderr));
    let text = String::from_utf8(map.stdout).unwrap();
    assert!(text.starts_with("delta_a,field_amplitude,stable,"));
    assert_eq!(text.lines().count(), 7);

    let table = optomech(&["ftable", "--axis", "nb", "--eta", "0.08", "--max", "10", "--orders", "3"]);
    assert_eq!(code(&table), 0);
    let text = String::from_utf8(table.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let f1: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((f1 - 0.968306).abs() < 1e-6, "{last}");
}
