//! Limiting Hele-Shaw spheroid: interface trajectories for both growth
//! cases, the matched pressure profile and its residual self-test.

use hele_shaw_limit::oracle::{
    build_profile, integrate_interface, interface_velocity, residual_self_test, SpheroidParams,
};
use hele_shaw_limit::GrowthPair;

fn params(g: GrowthPair) -> hele_shaw_limit::Result<SpheroidParams> {
    SpheroidParams::new(
        g.species1.gain,
        g.species2.gain,
        g.species1.homeostatic_pressure,
        g.species2.homeostatic_pressure,
        5.0,
        0.5,
    )
}

fn main() -> hele_shaw_limit::Result<()> {
    for (name, g) in [("GRfig1", GrowthPair::grfig1()), ("GRfig3", GrowthPair::grfig3())] {
        let p = params(g)?;
        println!("{name}: R1'(0) = {:.4}", interface_velocity(&p)?);
        let traj = integrate_interface(&p, 1.0, 1e-3)?;
        for t in [0.0, 0.1, 0.3, 0.6, 1.0] {
            match traj.radius_at(t) {
                Some(r) => println!("  R1({t}) = {r:.4}"),
                None => println!("  R1({t}) undefined ({:?})", traj.halted),
            }
        }
    }

    let p = params(GrowthPair::grfig3())?;
    let profile = build_profile(&p)?;
    println!("\nGRfig3 pressure at R1 = 0.5 (lambda = {:.4})", profile.lambda);
    for i in 0..=10 {
        let x = 0.5 * i as f64;
        println!("  p({x:.1}) = {:.5}", profile.pressure(x));
    }
    let check = residual_self_test(&p, 1e-2)?;
    println!(
        "residual {:.3e} -> {:.3e} (ratio {:.3}), gaps {:.1e} / {:.1e}",
        check.coarse, check.fine, check.ratio, check.continuity_gap, check.slope_gap
    );
    Ok(())
}
