use std::path::Path;
use std::process::{Command, Output};

fn oma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oma-bench")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_corrupt_identify() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean.csv");
    let noisy = dir.path().join("noisy.csv");

    let out = oma(&["simulate", "--beam", "SS", "--out", p(&clean), "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("9 channels x 50001 samples"));

    let out = oma(&["corrupt", "--in", p(&clean), "--nl", "0.2", "--seed", "3", "--out", p(&noisy)]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("nominal SNR 13.979"), "{text}");
    assert_eq!(text.matches("realized SNR").count(), 9);

    let modes = dir.path().join("modes.csv");
    let anpsd = dir.path().join("anpsd.csv");
    let out = oma(&[
        "identify", "--in", p(&noisy), "--method", "pp", "--beam", "SS", "--out", p(&modes), "--spectrum", p(&anpsd),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&modes).unwrap();
    let mut rows = table.lines();
    assert_eq!(rows.next().unwrap(), "mode,reference_hz,frequency_hz,relative_error_pct,mac,damping");
    assert_eq!(rows.count(), 5);
    assert!(std::fs::read_to_string(&anpsd).unwrap().starts_with("frequency_hz,value\n"));

    // without --beam every identified mode is listed with its shape
    let raw = dir.path().join("raw.csv");
    assert!(oma(&["identify", "--in", p(&noisy), "--method", "fdd", "--out", p(&raw)]).status.success());
    let header = std::fs::read_to_string(&raw).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with("mode,frequency_hz,damping,n2,"), "{header}");
}

#[test]
fn ssi_writes_a_stabilization_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("r.csv");
    assert!(oma(&["simulate", "--beam", "CC", "--duration", "2", "--out", p(&rec)]).status.success());
    let modes = dir.path().join("m.csv");
    let diagram = dir.path().join("d.csv");
    let out = oma(&[
        "identify", "--in", p(&rec), "--method", "ssi", "--beam", "CC", "--out", p(&modes), "--spectrum", p(&diagram),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d = std::fs::read_to_string(&diagram).unwrap();
    assert!(d.starts_with("order,frequency_hz,damping,stable_f,stable_d,stable_mac\n"));
    assert!(d.lines().count() > 50);
}

#[test]
fn bench_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(
        &config,
        r#"{"beams": [{"support": "CF", "duration": 1.0}], "noise_levels": [0.05], "runs": 2, "methods": ["pp"]}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = Command::new(env!("CARGO_BIN_EXE_oma-bench"))
        .args(["bench", "--config", p(&config), "--out", p(&out_dir)])
        .env("OMA_BENCH_JOBS", "1")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("2 runs"));
    let table = std::fs::read(out_dir.join("table_freq_CF.csv")).unwrap();

    let again = dir.path().join("again");
    let out = oma(&["report", "--in", p(&out_dir.join("report.json")), "--out", p(&again)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(again.join("table_freq_CF.csv")).unwrap(), table);
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(oma(&[]).status.code(), Some(1));
    assert_eq!(oma(&["identify", "--in", "x.csv"]).status.code(), Some(1));
    assert_eq!(oma(&["identify", "--in", "/nonexistent.csv", "--method", "pp", "--out", "o.csv"]).status.code(), Some(1));
    let out = oma(&["bench", "--config", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(oma(&["--version"]).status.code(), Some(0));
}
