use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodgelab"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hodgelab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn signature_of_split_weight() {
    let dir = scratch("sig");
    let out = bin()
        .args(["--out", dir.to_str().unwrap(), "--seed", "3", "signature", "--mu", "0.5,-0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("(n-, n+) = (1, 1), q* = 1"), "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("signature.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 3);
    assert_eq!(report["result"]["q_star"], 1);
    assert!(report["config"].is_object());
}

#[test]
fn malformed_phi_file_is_a_parse_error() {
    let dir = scratch("bad");
    let phi = dir.join("phi.json");
    std::fs::write(&phi, "{\"n\": 1, \"terms\": [").unwrap();
    let c = code(bin().args(["--out", dir.to_str().unwrap(), "signature", "--phi", phi.to_str().unwrap()]));
    assert_eq!(c, 2);
}

#[test]
fn usage_errors() {
    let dir = scratch("usage");
    let d = dir.to_str().unwrap();
    assert_eq!(code(bin().args(["--out", d, "heat", "--samples", "0"])), 2);
    assert_eq!(code(bin().args(["--out", d, "bergman", "--model", "nope"])), 2);
    assert_eq!(code(bin().args(["--out", d, "--tol", "bogus=1", "flag"])), 2);
    assert_eq!(code(bin().args(["--out", d, "--tol", "heat.route=0", "flag"])), 2);
    assert_eq!(code(bin().args(["--out", d, "frobnicate"])), 2);
}

#[test]
fn wall_weight_exit_code() {
    let dir = scratch("wall");
    assert_eq!(code(bin().args(["--out", dir.to_str().unwrap(), "flag", "--weight", "1,-1"])), 5);
}

#[test]
fn flag_worked_instance() {
    let dir = scratch("flag");
    let out = bin().args(["--out", dir.to_str().unwrap(), "flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("k =   1: bott 6 direct 6 equal"), "{stdout}");
    assert!(stdout.contains("Todd identity residual: exact 0"));
    assert!(stdout.contains("RR P1: k + 1"));
}

#[test]
fn heat_writes_trajectory() {
    let dir = scratch("heat");
    let c = code(bin().args(["--out", dir.to_str().unwrap(), "heat", "--mu", "1", "--samples", "8"]));
    assert_eq!(c, 0);
    let csv = std::fs::read_to_string(dir.join("heat_trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("t,A_11_re,A_11_im"));
    assert_eq!(lines.count(), 8);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("heat.json")).unwrap()).unwrap();
    assert!(report["result"]["log_slope"].as_f64().unwrap() < 0.0);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = scratch("cfg");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "seed = 9\n[flag]\nweight = [1, 1]\nk = [1, 2]\n").unwrap();
    let d = dir.to_str().unwrap();
    assert_eq!(code(bin().args(["--config", cfg.to_str().unwrap(), "--out", d, "--seed", "4", "flag"])), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("flag.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 4);
    assert_eq!(report["result"]["index"], 0);
    assert_eq!(report["result"]["bott"]["dim"], 8);
}

#[test]
fn p1_projector_trace() {
    let dir = scratch("p1");
    let out = bin()
        .args(["--out", dir.to_str().unwrap(), "bergman", "--model", "p1_oK", "--k", "5,6,7,8,9,10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("bergman.json")).unwrap()).unwrap();
    let trace = report["result"]["projectors"][0]["trace"].as_f64().unwrap();
    assert!((trace - 11.0).abs() < 1e-8);
}

#[test]
fn serre_comparison_reports_threshold() {
    let dir = scratch("serre");
    let out = bin()
        .args(["--out", dir.to_str().unwrap(), "flag", "--root-system", "A3", "--weight", "1,-4,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("k =   2: bott 0 direct - differ"), "{stdout}");
    assert!(stdout.contains("equal for all tested k ≥ 4"));
}
