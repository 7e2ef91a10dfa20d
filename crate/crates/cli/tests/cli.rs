use std::path::Path;
use std::process::{Command, Output};

fn akucb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akucb"))
        .args(args)
        .env_remove("AKUCB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn list_presets() {
    let out = akucb(&["list-presets"]);
    assert!(out.status.success());
    let names = text(&out.stdout);
    for name in ["fig_regret_grid", "fig_stability_grid_desk", "fig_ring", "fig_random_desk", "fig_frame_sweep"] {
        assert!(names.lines().any(|l| l == name), "{name} missing from {names}");
    }
}

#[test]
fn unknown_preset_exits_2_and_lists_names() {
    let out = akucb(&["preset", "fig_nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err = text(&out.stderr);
    assert!(err.contains("fig_nope"));
    assert!(err.contains("fig_ring_desk") && err.contains("fig_regret_grid"), "{err}");
}

#[test]
fn bad_override_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = akucb(&["--out-dir", out_dir, "preset", "fig_ring_desk", "--override", "no_such_key=1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).starts_with("error:"));
}

#[test]
fn check_passes() {
    let out = akucb(&["check"]);
    let stdout = text(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.lines().count() >= 4);
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")), "{stdout}");
}

fn small_ring(out_dir: &Path, parallel: &str) -> Output {
    akucb(&[
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--runs",
        "2",
        "--seed",
        "11",
        "--parallel",
        parallel,
        "preset",
        "fig_ring_desk",
        "--override",
        "frame_len=300",
        "--override",
        "horizon=1200",
        "--override",
        "output.queue_trace_every=0",
    ])
}

#[test]
fn preset_run_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out = small_ring(a.path(), "1");
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("wrote"));
    assert!(small_ring(b.path(), "3").status.success());

    let csv = std::fs::read_to_string(a.path().join("stability.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("policy,lambda,run,end_total_queue"));
    // 3 policies x 2 runs
    assert_eq!(lines.count(), 6);
    assert_eq!(csv, std::fs::read_to_string(b.path().join("stability.csv")).unwrap());

    let cfg = std::fs::read_to_string(a.path().join("config.toml")).unwrap();
    assert!(cfg.contains("seed = 11") && cfg.contains("runs = 2"), "{cfg}");
}

#[test]
fn run_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.toml");
    std::fs::write(
        &cfg_path,
        r#"
schema_version = 1
name = "tiny"
seed = 1
runs = 1
frame_len = 100
horizon = 300

[topology]
kind = "ring"
n = 6

[traffic]
lambda = [0.1]
mu = [0.5, 0.5]

[[policies]]
kind = "dakucb"
k = 2
p = 0.3
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = akucb(&["--out-dir", out_dir.to_str().unwrap(), "run", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("stability.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("dA2-UCB,0.1,0,"), "{csv}");

    let missing = akucb(&["run", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}
