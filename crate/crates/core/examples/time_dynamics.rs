//! Two-block run at epsilon = 1: plateau densities and interface over time.
//!
//! `cargo run --release --example time_dynamics [output-dir]`

use hele_shaw_limit::config::parse_config;
use hele_shaw_limit::sweep::plateau_density;
use hele_shaw_limit::{io, run};

fn main() -> hele_shaw_limit::Result<()> {
    let config = parse_config(include_str!("../configs/fig1.cfg"))?;
    let traj = run(&config.sim_config())?;
    let eps = config.epsilon;
    println!("N_M^1 = {:.4}, N_M^2 = {:.4}", 2.0 / (eps + 2.0), 1.0 / (eps + 1.0));
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "t", "left", "right", "zeta", "max p");
    for snap in &traj.snapshots {
        let max_p = snap.p.iter().copied().fold(0.0, f64::max);
        println!(
            "{:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.3}",
            snap.time,
            plateau_density(snap, &snap.n1),
            plateau_density(snap, &snap.n2),
            snap.summary.interface.unwrap_or(f64::NAN),
            max_p
        );
    }
    println!("{} steps in {:.2?}", traj.report.steps, traj.report.wall_time);
    if let Some(dir) = std::env::args().nth(1) {
        let written = io::write_trajectory(&traj, dir.as_ref())?;
        println!("wrote {} snapshots to {dir}", written.snapshots.len());
    }
    Ok(())
}
