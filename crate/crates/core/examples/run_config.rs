//! Runs any config file and writes snapshots and diagnostics, the library
//! counterpart of `hele-shaw run`.
//!
//! `cargo run --release --example run_config -- configs/fig3b.cfg out/fig3b`

use std::path::PathBuf;

use hele_shaw_limit::config::parse_config;
use hele_shaw_limit::{io, run};

fn main() -> hele_shaw_limit::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(path) = args.next() else {
        eprintln!("usage: run_config <config> [output-dir]");
        std::process::exit(2);
    };
    let config = parse_config(&std::fs::read_to_string(&path)?)?;
    for warning in config.hypotheses()?.warnings() {
        println!("warning: {}: {}", warning.name, warning.detail);
    }
    let dir = args.next().map(PathBuf::from).unwrap_or(config.output_dir.clone());
    let traj = run(&config.sim_config())?;
    let written = io::write_trajectory(&traj, &dir)?;
    println!(
        "{} steps, {} snapshots and {} in {}",
        traj.report.steps,
        written.snapshots.len(),
        written.diagnostics.display(),
        dir.display()
    );
    let back = io::read_snapshot(written.snapshots.last().expect("snapshot"))?;
    assert_eq!(back.n1, traj.last().n1);
    Ok(())
}
