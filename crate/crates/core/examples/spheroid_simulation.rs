//! Spheroid runs at epsilon = 0.01 for both growth cases, compared with the
//! limiting interface.
//!
//! `cargo run --release --example spheroid_simulation [cells]`

use hele_shaw_limit::config::parse_config;
use hele_shaw_limit::oracle::{integrate_interface, SpheroidParams};
use hele_shaw_limit::run;

fn main() -> hele_shaw_limit::Result<()> {
    let cells: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    for text in [include_str!("../configs/fig3a.cfg"), include_str!("../configs/fig3b.cfg")] {
        let config = parse_config(text)?;
        let mut sim = config.sim_config();
        if let Some(m) = cells {
            sim.num_cells = m;
        }
        let g = &config.growth;
        let params = SpheroidParams::new(
            g.species1.gain,
            g.species2.gain,
            g.species1.homeostatic_pressure,
            g.species2.homeostatic_pressure,
            config.half_length,
            config.oracle_radius,
        )?;
        let ode = integrate_interface(&params, config.t_max, config.oracle_dt)?;
        let traj = run(&sim)?;
        println!(
            "P1 = {}, P2 = {}, M = {}",
            g.species1.homeostatic_pressure, g.species2.homeostatic_pressure, sim.num_cells
        );
        println!("{:>6} {:>10} {:>10} {:>10}", "t", "mass1", "zeta", "R1 (limit)");
        for snap in &traj.snapshots {
            let zeta = snap.summary.interface.map_or("-".into(), |z| format!("{z:.4}"));
            let r = ode.radius_at(snap.time).map_or("-".into(), |r| format!("{r:.4}"));
            println!("{:>6} {:>10.4} {:>10} {:>10}", snap.time, snap.summary.mass1, zeta, r);
        }
        println!();
    }
    Ok(())
}
