//! Epsilon ladder on the two-block data with the convergence table.
//!
//! `cargo run --release --example epsilon_sweep` runs the full ladder
//! (a few seconds per rung); pass `quick` to stop at epsilon = 0.01 on
//! coarser grids.

use hele_shaw_limit::config::parse_config;
use hele_shaw_limit::sweep::{convergence_table, run_sweep};

fn main() -> hele_shaw_limit::Result<()> {
    let mut config = parse_config(include_str!("../configs/fig2e.cfg"))?.sweep_config();
    if std::env::args().any(|a| a == "quick") {
        config.epsilons = vec![1.0, 0.1, 0.01];
        config.cells = vec![200, 200, 100];
    }
    let result = run_sweep(&config)?;
    for rec in &result.records {
        let p = rec.last_probe().expect("probe");
        println!(
            "eps = {:<6} M = {:<4} plateaus {:.5} / {:.5}  zeta = {:.3}  ({} steps, {:.1?})",
            rec.epsilon,
            rec.num_cells,
            p.plateau_density_left,
            p.plateau_density_right,
            p.interface_position.unwrap_or(f64::NAN),
            rec.step_count,
            rec.wall_time
        );
    }
    println!("\n{:>8} {:>12} {:>8} {:>12} {:>8}", "eps", "L1 limit", "ratio", "comp L1", "ratio");
    let fmt = |v: Option<f64>, prec: usize| v.map_or("-".into(), |v| format!("{v:.prec$e}"));
    for row in convergence_table(&result) {
        println!(
            "{:>8} {:>12} {:>8} {:>12} {:>8}",
            row.epsilon,
            fmt(row.l1_distance_to_limit, 3),
            fmt(row.l1_ratio, 2),
            fmt(row.complementary_residual_l1, 3),
            fmt(row.complementary_ratio, 2)
        );
    }
    Ok(())
}
