//! Runtime residuals of the limit theory: interface position, segregation
//! overlap, density and pressure bounds, and the complementary relation.

use crate::constitutive::{Growth, GrowthPair};
use crate::error::{Error, Result};
use crate::grid::{Snapshot, TwoSpeciesState};
use crate::solver::Trajectory;

/// Cells lighter than this do not take part in interface interpolation.
const INTERPOLATION_FLOOR: f64 = 1e-6;

/// Locates the species interface: the face after the rightmost cell where
/// species 1 dominates, refined by linear interpolation of `n1 - n2` when
/// both neighbours are occupied.
pub fn interface_position(state: &TwoSpeciesState, x: &[f64]) -> Result<f64> {
    if x.len() != state.len() {
        return Err(Error::Config(format!(
            "{} positions for {} cells",
            x.len(),
            state.len()
        )));
    }
    let j = state
        .n1
        .iter()
        .zip(&state.n2)
        .rposition(|(&a, &b)| a > 0.0 && a >= b)
        .ok_or_else(|| Error::UndefinedInterface("no cell dominated by species 1".into()))?;
    if j + 1 >= state.len() {
        return Err(Error::UndefinedInterface(
            "no species-2 region to the right of species 1".into(),
        ));
    }
    let (left, right) = (j, j + 1);
    let n_left = state.n1[left] + state.n2[left];
    let n_right = state.n1[right] + state.n2[right];
    if n_left > INTERPOLATION_FLOOR && n_right > INTERPOLATION_FLOOR {
        let d_left = state.n1[left] - state.n2[left];
        let d_right = state.n1[right] - state.n2[right];
        // d_left >= 0 > d_right
        let w = d_left / (d_left - d_right);
        Ok(x[left] + w * (x[right] - x[left]))
    } else {
        Ok(0.5 * (x[left] + x[right]))
    }
}

/// `(max_j n1_j n2_j, dx * sum_j n1_j n2_j)`.
pub fn segregation_overlap(state: &TwoSpeciesState, dx: f64) -> (f64, f64) {
    let (max, sum) = state
        .n1
        .iter()
        .zip(&state.n2)
        .fold((0.0f64, 0.0), |(m, s), (a, b)| {
            let r = a * b;
            (m.max(r), s + r)
        });
    (max, dx * sum)
}

/// Scalar diagnostics at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub interface_position: Option<f64>,
    pub overlap_max: f64,
    pub overlap_mass: f64,
    pub mass1: f64,
    pub mass2: f64,
    pub max_n: f64,
    pub max_p: f64,
    /// Upper bound `P_M / (P_M + eps)` on the total density.
    pub packing_bound: f64,
    /// `min_j n_j - A_0 exp(-g_m t)`; `None` when the initial data was not
    /// bounded away from zero.
    pub lower_bound_margin: Option<f64>,
    /// Filled in when the complementary relation can be evaluated.
    pub complementary_l1: Option<f64>,
}

pub fn bounds_report(
    state: &TwoSpeciesState,
    x: &[f64],
    epsilon: f64,
    pair: &GrowthPair,
    lower_bound: Option<f64>,
    death_bound: f64,
) -> DiagnosticsRecord {
    let dx = if x.len() > 1 { x[1] - x[0] } else { 0.0 };
    let (overlap_max, overlap_mass) = segregation_overlap(state, dx);
    let mut max_n: f64 = 0.0;
    let mut min_n = f64::INFINITY;
    for n in state.total() {
        max_n = max_n.max(n);
        min_n = min_n.min(n);
    }
    let max_p = if max_n < 1.0 {
        epsilon * max_n / (1.0 - max_n)
    } else {
        f64::INFINITY
    };
    let pm = pair.max_homeostatic_pressure();
    let lower_bound_margin = match lower_bound {
        Some(a0) if a0 > 0.0 && !state.is_empty() => {
            Some(min_n - a0 * (-death_bound * state.time).exp())
        }
        _ => None,
    };
    DiagnosticsRecord {
        time: state.time,
        interface_position: interface_position(state, x).ok(),
        overlap_max,
        overlap_mass,
        mass1: state.mass1(dx),
        mass2: state.mass2(dx),
        max_n,
        max_p,
        packing_bound: pm / (pm + epsilon),
        lower_bound_margin,
        complementary_l1: None,
    }
}

/// How the time integrals in the complementary relation are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeQuadrature {
    /// Step-by-step sums accumulated by the solver, consistent with the
    /// explicit update.
    SolverSteps,
    /// Trapezoidal rule over the stored snapshots.
    SnapshotTrapezoid,
}

/// Cellwise residual of `p (d_xx P + I + n_ini - 1)` at one time, where
/// `P = int_0^t p ds` and `I = int_0^t (n1 G1(p) + n2 G2(p)) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementaryResidual {
    pub time_horizon: f64,
    pub residual: Vec<f64>,
    pub norm_l1: f64,
}

fn snapshot_index(traj: &Trajectory, t: f64) -> Result<usize> {
    let tol = 1e-12 * t.abs().max(1.0);
    traj.snapshots
        .iter()
        .position(|s| (s.time - t).abs() <= tol)
        .ok_or_else(|| Error::Quadrature(format!("no snapshot at t = {t}")))
}

/// Pressure recomputed from the stored densities.
fn cell_pressure(s: &Snapshot, j: usize, epsilon: f64) -> f64 {
    let n = (s.n1[j] + s.n2[j]).max(0.0);
    if n < 1.0 {
        epsilon * n / (1.0 - n)
    } else {
        f64::INFINITY
    }
}

fn reaction(pair: &GrowthPair, s: &Snapshot, j: usize, p: f64) -> f64 {
    s.n1[j] * pair.species1.rate(p) + s.n2[j] * pair.species2.rate(p)
}

fn trapezoid_integrals(
    traj: &Trajectory,
    epsilon: f64,
    pair: &GrowthPair,
    upto: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if upto < 2 {
        return Err(Error::Quadrature(format!(
            "trapezoidal quadrature needs at least 3 snapshots, have {}",
            upto + 1
        )));
    }
    let m = traj.grid.num_cells();
    let mut pressure = vec![0.0; m];
    let mut growth = vec![0.0; m];
    for w in traj.snapshots[..=upto].windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let h = 0.5 * (b.time - a.time);
        for j in 0..m {
            let (pa, pb) = (cell_pressure(a, j, epsilon), cell_pressure(b, j, epsilon));
            pressure[j] += h * (pa + pb);
            growth[j] += h * (reaction(pair, a, j, pa) + reaction(pair, b, j, pb));
        }
    }
    Ok((pressure, growth))
}

/// Second difference with reflected ghost cells (zero-flux boundaries).
pub fn neumann_second_difference(v: &[f64], dx: f64) -> Vec<f64> {
    let m = v.len();
    let inv = 1.0 / (dx * dx);
    (0..m)
        .map(|j| {
            let left = if j == 0 { v[0] } else { v[j - 1] };
            let right = if j + 1 == m { v[m - 1] } else { v[j + 1] };
            (left - 2.0 * v[j] + right) * inv
        })
        .collect()
}

pub fn complementary_residual(
    traj: &Trajectory,
    epsilon: f64,
    pair: &GrowthPair,
    t: f64,
    quadrature: TimeQuadrature,
) -> Result<ComplementaryResidual> {
    let idx = snapshot_index(traj, t)?;
    let (pressure_int, growth_int) = match quadrature {
        TimeQuadrature::SnapshotTrapezoid => trapezoid_integrals(traj, epsilon, pair, idx)?,
        TimeQuadrature::SolverSteps => {
            let acc = traj.snapshots[idx].integrals.as_ref().ok_or_else(|| {
                Error::Quadrature("snapshot carries no accumulated integrals".into())
            })?;
            (acc.pressure.clone(), acc.growth.clone())
        }
    };
    let dx = traj.grid.cell_width();
    let lap = neumann_second_difference(&pressure_int, dx);
    let init = traj.initial();
    let snap = &traj.snapshots[idx];
    let residual: Vec<f64> = (0..snap.len())
        .map(|j| {
            let p = cell_pressure(snap, j, epsilon);
            if p == 0.0 {
                0.0
            } else {
                let n_ini = init.n1[j] + init.n2[j];
                p * (lap[j] + growth_int[j] + n_ini - 1.0)
            }
        })
        .collect();
    let norm_l1 = dx * residual.iter().map(|r| r.abs()).sum::<f64>();
    Ok(ComplementaryResidual {
        time_horizon: snap.time,
        residual,
        norm_l1,
    })
}

/// One record per snapshot of the trajectory, including the complementary
/// residual wherever it is computable.
pub fn diagnostics_series(traj: &Trajectory, quadrature: TimeQuadrature) -> Vec<DiagnosticsRecord> {
    let init = traj.initial();
    let a0 = init.total().fold(f64::INFINITY, f64::min);
    let lower = (a0 > 0.0).then_some(a0);
    let g_m = traj.growth.death_bound();
    traj.snapshots
        .iter()
        .map(|s| {
            let mut rec = bounds_report(&s.state(), &s.x, traj.epsilon, &traj.growth, lower, g_m);
            rec.complementary_l1 =
                complementary_residual(traj, traj.epsilon, &traj.growth, s.time, quadrature)
                    .ok()
                    .map(|r| r.norm_l1);
            rec
        })
        .collect()
}
