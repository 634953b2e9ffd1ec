//! Residual of the limit complementary relation along a single run, with
//! both time quadratures.

use hele_shaw_limit::diagnostics::{complementary_residual, diagnostics_series, TimeQuadrature};
use hele_shaw_limit::{run, GrowthPair, OutputSchedule, Preset, SimConfig};

fn main() -> hele_shaw_limit::Result<()> {
    for eps in [1.0, 0.1, 0.01] {
        let mut config = SimConfig::new(Preset::TwoBlock, eps, GrowthPair::grfig());
        config.num_cells = 200;
        config.t_max = 1.5;
        config.output = OutputSchedule::Count(16);
        let traj = run(&config)?;
        let steps =
            complementary_residual(&traj, eps, &traj.growth, 1.5, TimeQuadrature::SolverSteps)?;
        let trapezoid =
            complementary_residual(&traj, eps, &traj.growth, 1.5, TimeQuadrature::SnapshotTrapezoid)?;
        println!(
            "eps = {eps:<5} L1 residual at t = 1.5: {:.4e} (steps), {:.4e} (16 snapshots)",
            steps.norm_l1, trapezoid.norm_l1
        );
        let last = diagnostics_series(&traj, TimeQuadrature::SolverSteps);
        let r = last.last().expect("records");
        println!(
            "            max n = {:.6} (bound {:.6}), overlap mass {:.3e}",
            r.max_n, r.packing_bound, r.overlap_mass
        );
    }
    Ok(())
}
