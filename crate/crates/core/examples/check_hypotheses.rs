//! Hypothesis reports for the shipped growth pairs and for a pair that
//! violates them.

use hele_shaw_limit::constitutive::{validate_hypotheses, GrowthModel};
use hele_shaw_limit::{init_from_preset, make_grid, GrowthPair, Preset};

fn main() -> hele_shaw_limit::Result<()> {
    let grid = make_grid(5.0, 500)?;
    let cases = [
        ("GRfig, two blocks, eps = 1", GrowthPair::grfig(), Preset::TwoBlock, 1.0),
        ("GRfig, two blocks, eps = 0.01", GrowthPair::grfig(), Preset::TwoBlock, 0.01),
        ("GRfig3, spheroid, eps = 0.01", GrowthPair::grfig3(), Preset::Spheroid, 0.01),
        (
            "tiny homeostatic pressure, eps = 0.1",
            GrowthPair::new(GrowthModel::new(1.0, 0.01)?, GrowthModel::new(1.0, 0.02)?),
            Preset::TwoBlock,
            0.1,
        ),
    ];
    for (label, pair, preset, eps) in cases {
        let state = init_from_preset(&grid, preset, eps)?;
        let report = validate_hypotheses(&pair, eps, &state);
        println!("== {label}\n{report}");
    }
    Ok(())
}
