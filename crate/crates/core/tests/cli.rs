use std::fs;

use hele_shaw_limit::cli::cli_main;
use hele_shaw_limit::io::{read_snapshot, DIAGNOSTICS_HEADER};

fn cli(args: &[&str]) -> i32 {
    cli_main(std::iter::once("hele-shaw").chain(args.iter().copied()))
}

#[test]
fn run_fig1_writes_seven_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig1.cfg");
    let out = dir.path().join("fig1");
    assert_eq!(cli(&["run", "--config", cfg, "--out", out.to_str().unwrap()]), 0);
    let mut snaps: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("snapshot_"))
        .collect();
    snaps.sort();
    assert_eq!(snaps.len(), 7);
    let diag = fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().next().unwrap(), DIAGNOSTICS_HEADER);
    assert_eq!(diag.lines().count(), 8);
    let last = read_snapshot(&out.join(&snaps[6])).unwrap();
    assert_eq!(last.time, 2.0);
    assert_eq!(last.len(), 500);
}

#[test]
fn oracle_grows_when_inner_pressure_is_higher() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle");
    let status = cli(&[
        "oracle", "--g1", "10", "--g2", "5", "--p1", "4", "--p2", "2", "--L", "2.5", "--r0", "0.5",
        "--tmax", "1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(status, 0);
    let series = fs::read_to_string(out.join("interface.csv")).unwrap();
    let radii: Vec<f64> = series
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(radii.len() > 10);
    assert!(radii.windows(2).all(|w| w[1] > w[0]));
    assert!(out.join("profile_initial.csv").exists());
    assert!(out.join("profile_final.csv").exists());
}

#[test]
fn check_default_and_config() {
    assert_eq!(cli(&["check"]), 0);
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig3b.cfg");
    assert_eq!(cli(&["check", "--config", cfg]), 0);
}

#[test]
fn sweep_writes_one_directory_per_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ladder.cfg");
    fs::write(
        &cfg,
        "preset = twoblock\nmode = sweep\ncells = 60\ntmax = 0.3\n\
         epsilons = 1, 0.5\nprobe_times = 0.1, 0.3\n",
    )
    .unwrap();
    let out = dir.path().join("sweep");
    assert_eq!(cli(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    for eps in ["eps_1", "eps_0.5"] {
        assert!(out.join(eps).join("diagnostics.csv").exists());
        assert!(out.join(eps).join("probes.csv").exists());
    }
    let report = fs::read_to_string(out.join("sweep_report.csv")).unwrap();
    assert_eq!(report.lines().count(), 3);
    assert!(out.join("sweep_timing.csv").exists());
}

#[test]
fn errors_exit_nonzero() {
    assert_ne!(cli(&["frobnicate"]), 0);
    assert_ne!(cli(&[]), 0);
    assert_ne!(cli(&["run", "--config", "/nonexistent/file.cfg"]), 0);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "preset = twoblock\nepsilon = 0\n").unwrap();
    assert_ne!(cli(&["run", "--config", cfg.to_str().unwrap()]), 0);
    assert_ne!(
        cli(&["oracle", "--g1", "10", "--g2", "5", "--p1", "4", "--p2", "2", "--L", "2.5", "--r0", "3", "--tmax", "1"]),
        0
    );
}
