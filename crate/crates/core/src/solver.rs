//! Explicit finite-volume upwind kernel.
//!
//! Face velocities come from the discrete pressure of the total density,
//! `u_{j+1/2} = -(p_{j+1} - p_j) / dx`, and are zero on the two boundary faces
//! (homogeneous Neumann). Each species is transported with the upwind flux
//! `F = u^+ n_j + u^- n_{j+1}` and grows with its own rate evaluated at the
//! old-time pressure:
//!
//! `n^{k+1}_j = n^k_j - dt/dx (F_{j+1/2} - F_{j-1/2}) + dt n^k_j G(p^k_j)`.

use std::time::{Duration, Instant};

use crate::constitutive::{Growth, GrowthPair};
use crate::error::{Error, Result};
use crate::grid::{
    init_from_preset, make_grid, Grid1D, Preset, Snapshot, TimeIntegrals, TwoSpeciesState,
};

/// Guards divisions in the time-step bounds when a rate vanishes.
const TINY: f64 = 1e-30;

/// Species densities below this are rounding noise, not a stability failure.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-12;

/// Threshold on `n1 * n2` counting a cell as shared by both species.
pub const OVERLAP_THRESHOLD: f64 = 1e-12;

/// Values on the `M + 1` faces `j + 1/2`, `j = 0..=M`. Boundary entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField(Vec<f64>);

impl FaceField {
    pub fn zeros(num_cells: usize) -> Self {
        Self(vec![0.0; num_cells + 1])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |a, &b| a.max(b.abs()))
    }
}

impl std::ops::Index<usize> for FaceField {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn fill_face_velocities(p: &[f64], dx: f64, out: &mut [f64]) {
    let m = p.len();
    out[0] = 0.0;
    out[m] = 0.0;
    for j in 1..m {
        out[j] = -(p[j] - p[j - 1]) / dx;
    }
}

fn fill_upwind_flux(n: &[f64], u: &[f64], out: &mut [f64]) {
    let m = n.len();
    out[0] = 0.0;
    out[m] = 0.0;
    for j in 1..m {
        let v = u[j];
        out[j] = v.max(0.0) * n[j - 1] + v.min(0.0) * n[j];
    }
}

pub fn face_velocities(p_cells: &[f64], dx: f64) -> FaceField {
    let mut out = FaceField::zeros(p_cells.len());
    if !p_cells.is_empty() {
        fill_face_velocities(p_cells, dx, &mut out.0);
    }
    out
}

pub fn upwind_flux(n_cells: &[f64], u_faces: &FaceField) -> Result<FaceField> {
    if u_faces.len() != n_cells.len() + 1 {
        return Err(Error::Config(format!(
            "{} faces do not match {} cells",
            u_faces.len(),
            n_cells.len()
        )));
    }
    let mut out = FaceField::zeros(n_cells.len());
    if !n_cells.is_empty() {
        fill_upwind_flux(n_cells, &u_faces.0, &mut out.0);
    }
    Ok(out)
}

/// Bookkeeping for one explicit step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt_used: f64,
    pub max_face_speed: f64,
    pub max_diffusion_slope: f64,
    /// `dx * sum n1` before and after.
    pub mass1: (f64, f64),
    pub mass2: (f64, f64),
    /// `dt * dx * sum_j (n1 G1(p) + n2 G2(p))` at the old time.
    pub reaction_integral: f64,
}

impl StepReport {
    /// `|M^{k+1} - M^k - reaction| / M^k` for the total mass.
    pub fn ledger_residual(&self) -> f64 {
        let before = self.mass1.0 + self.mass2.0;
        let after = self.mass1.1 + self.mass2.1;
        let gap = (after - before - self.reaction_integral).abs();
        if before > 0.0 {
            gap / before
        } else {
            gap
        }
    }
}

/// Old-time quantities shared by the time-step bound and the update.
#[derive(Debug, Clone)]
struct Workspace {
    n: Vec<f64>,
    p: Vec<f64>,
    u: Vec<f64>,
    flux: Vec<f64>,
    max_slope: f64,
    max_speed: f64,
    max_rate: f64,
    max_saturation_rate: f64,
}

impl Workspace {
    fn new(m: usize) -> Self {
        Self {
            n: vec![0.0; m],
            p: vec![0.0; m],
            u: vec![0.0; m + 1],
            flux: vec![0.0; m + 1],
            max_slope: 0.0,
            max_speed: 0.0,
            max_rate: 0.0,
            max_saturation_rate: 0.0,
        }
    }

    fn prepare(&mut self, state: &TwoSpeciesState, pair: &GrowthPair, epsilon: f64, dx: f64) -> Result<()> {
        let mut max_slope: f64 = 0.0;
        let mut max_rate: f64 = 0.0;
        let mut max_saturation: f64 = 0.0;
        let (g1, g2) = (&pair.species1, &pair.species2);
        for (j, (a, b)) in state.n1.iter().zip(&state.n2).enumerate() {
            let mut n = a + b;
            if !(n < 1.0) {
                return Err(stability(state.time, j, format!("total density {n} >= 1")));
            }
            if n < 0.0 {
                if n < -NEGATIVITY_TOLERANCE {
                    return Err(stability(state.time, j, format!("total density {n} < 0")));
                }
                n = 0.0;
            }
            let gap = 1.0 - n;
            let p = epsilon * n / gap;
            self.n[j] = n;
            self.p[j] = p;
            max_slope = max_slope.max(epsilon * n / (gap * gap));
            max_rate = max_rate
                .max(pair.species1.rate(p).abs())
                .max(pair.species2.rate(p).abs());
            // secant slope of the reaction between n and the species' packing density
            let mut sat: f64 = 0.0;
            if *a > 0.0 {
                sat = sat.max(g1.gain.abs() * (epsilon + g1.homeostatic_pressure));
            }
            if *b > 0.0 {
                sat = sat.max(g2.gain.abs() * (epsilon + g2.homeostatic_pressure));
            }
            max_saturation = max_saturation.max(sat * n / gap);
        }
        fill_face_velocities(&self.p, dx, &mut self.u);
        self.max_speed = self.u.iter().fold(0.0, |a, &b| a.max(b.abs()));
        self.max_slope = max_slope;
        self.max_rate = max_rate.max(pair.growth_bound());
        self.max_saturation_rate = max_saturation;
        Ok(())
    }

    fn stable_dt(&self, cfl: f64, dx: f64) -> f64 {
        let diffusion = dx * dx / (2.0 * self.max_slope + TINY);
        let advection = dx / (self.max_speed + TINY);
        let reaction = 1.0 / (self.max_rate + TINY);
        let saturation = 1.0 / (self.max_saturation_rate + TINY);
        cfl * diffusion.min(advection).min(reaction).min(saturation)
    }

    /// Writes the updated species into `next`; the old state is only read.
    fn update(
        &mut self,
        state: &TwoSpeciesState,
        pair: &GrowthPair,
        dt: f64,
        dx: f64,
        next: &mut TwoSpeciesState,
        integrals: Option<&mut TimeIntegrals>,
    ) -> Result<StepReport> {
        let m = state.len();
        let ratio = dt / dx;
        let mut reaction_sum = 0.0;
        let mass_before = (state.mass1(dx), state.mass2(dx));

        for (species, (old, new)) in [(&state.n1, &mut next.n1), (&state.n2, &mut next.n2)]
            .into_iter()
            .enumerate()
        {
            let growth = if species == 0 { &pair.species1 } else { &pair.species2 };
            fill_upwind_flux(old, &self.u, &mut self.flux);
            for j in 0..m {
                let reaction = old[j] * growth.rate(self.p[j]);
                reaction_sum += reaction;
                new[j] = old[j] - ratio * (self.flux[j + 1] - self.flux[j]) + dt * reaction;
            }
        }
        next.time = state.time + dt;

        for j in 0..m {
            let (a, b) = (next.n1[j], next.n2[j]);
            if a < -NEGATIVITY_TOLERANCE || b < -NEGATIVITY_TOLERANCE {
                return Err(stability(
                    next.time,
                    j,
                    format!("negative density (n1 = {a:e}, n2 = {b:e})"),
                ));
            }
            if !(a + b < 1.0) {
                return Err(stability(next.time, j, format!("total density {} >= 1", a + b)));
            }
        }

        if let Some(acc) = integrals {
            for j in 0..m {
                acc.pressure[j] += dt * self.p[j];
                acc.growth[j] += dt
                    * (state.n1[j] * pair.species1.rate(self.p[j])
                        + state.n2[j] * pair.species2.rate(self.p[j]));
            }
        }

        Ok(StepReport {
            dt_used: dt,
            max_face_speed: self.max_speed,
            max_diffusion_slope: self.max_slope,
            mass1: (mass_before.0, next.mass1(dx)),
            mass2: (mass_before.1, next.mass2(dx)),
            reaction_integral: dt * dx * reaction_sum,
        })
    }
}

fn stability(time: f64, cell: usize, reason: String) -> Error {
    Error::Stability {
        step: 0,
        cell,
        time,
        reason,
    }
}

fn with_step(err: Error, step_index: usize) -> Error {
    match err {
        Error::Stability {
            cell, time, reason, ..
        } => Error::Stability {
            step: step_index,
            cell,
            time,
            reason,
        },
        other => other,
    }
}

/// Largest admissible step:
/// `cfl * min(dx^2 / (2 max H'), dx / max|u|, 1 / G, min_j (1 - n_j) / (g n_j (eps + P_M)))`.
///
/// `G` is the larger of `G_m` and the largest `|G_i(p_j)|` on the state. The
/// last bound keeps the growth term from stepping a cell past its packing
/// density `P_M / (eps + P_M)`; it is taken over the species present in each
/// cell.
pub fn stable_dt(
    state: &TwoSpeciesState,
    pair: &GrowthPair,
    epsilon: f64,
    cfl: f64,
    dx: f64,
) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::Config(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    let mut ws = Workspace::new(state.len());
    ws.prepare(state, pair, epsilon, dx)?;
    Ok(ws.stable_dt(cfl, dx))
}

/// One explicit forward-Euler step of size `dt`.
pub fn step(
    state: &TwoSpeciesState,
    pair: &GrowthPair,
    epsilon: f64,
    dt: f64,
    dx: f64,
) -> Result<(TwoSpeciesState, StepReport)> {
    if !(dt > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    let m = state.len();
    if m < 3 {
        return Err(Error::Config(format!("at least 3 cells required, got {m}")));
    }
    let mut ws = Workspace::new(m);
    ws.prepare(state, pair, epsilon, dx)?;
    let mut next = state.clone();
    let report = ws.update(state, pair, dt, dx, &mut next, None)?;
    Ok((next, report))
}

/// When snapshots are emitted.
#[derive(Debug, Clone, PartialEq)]
pub enum OutputSchedule {
    /// Evenly spaced snapshots including `t = 0` and `t_max`.
    Count(usize),
    /// Explicit times; `0` and `t_max` are always added.
    Times(Vec<f64>),
}

impl OutputSchedule {
    /// Sorted, deduplicated output times within `[0, t_max]`.
    pub fn times(&self, t_max: f64) -> Vec<f64> {
        let mut times: Vec<f64> = match self {
            OutputSchedule::Count(k) => {
                let k = (*k).max(2);
                (0..k)
                    .map(|i| if i + 1 == k { t_max } else { t_max * i as f64 / (k - 1) as f64 })
                    .collect()
            }
            OutputSchedule::Times(ts) => ts.iter().copied().filter(|&t| t >= 0.0 && t <= t_max).collect(),
        };
        times.push(0.0);
        times.push(t_max);
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }
}

/// Everything a single simulation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub preset: Preset,
    pub epsilon: f64,
    pub half_length: f64,
    pub num_cells: usize,
    pub cfl: f64,
    pub t_max: f64,
    pub output: OutputSchedule,
    pub growth: GrowthPair,
}

impl SimConfig {
    pub fn new(preset: Preset, epsilon: f64, growth: GrowthPair) -> Self {
        Self {
            preset,
            epsilon,
            half_length: 5.0,
            num_cells: 500,
            cfl: 0.9,
            t_max: 1.0,
            output: OutputSchedule::Count(7),
            growth,
        }
    }

    pub fn grid(&self) -> Result<Grid1D> {
        make_grid(self.half_length, self.num_cells)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::Config(format!("t_max must be nonnegative, got {}", self.t_max)));
        }
        self.grid()?;
        Ok(())
    }
}

/// Per-step invariant extrema collected over a whole run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantLedger {
    /// Largest relative mass-ledger residual of any step.
    pub max_ledger_residual: f64,
    /// Smallest species density seen.
    pub min_density: f64,
    /// Largest total density seen.
    pub max_total_density: f64,
    /// Largest number of cells with `n1 n2 > 1e-12`.
    pub max_overlap_cells: usize,
    /// Largest `dx * sum_j n1_j n2_j`.
    pub max_overlap_mass: f64,
    /// Smallest step taken.
    pub min_dt: f64,
}

impl InvariantLedger {
    fn new() -> Self {
        Self {
            max_ledger_residual: 0.0,
            min_density: f64::INFINITY,
            max_total_density: 0.0,
            max_overlap_cells: 0,
            max_overlap_mass: 0.0,
            min_dt: f64::INFINITY,
        }
    }

    fn observe_state(&mut self, state: &TwoSpeciesState, dx: f64) {
        let mut cells = 0;
        let mut overlap = 0.0;
        for (&a, &b) in state.n1.iter().zip(&state.n2) {
            self.min_density = self.min_density.min(a).min(b);
            self.max_total_density = self.max_total_density.max(a + b);
            let r = a * b;
            if r > OVERLAP_THRESHOLD {
                cells += 1;
            }
            overlap += r;
        }
        self.max_overlap_cells = self.max_overlap_cells.max(cells);
        self.max_overlap_mass = self.max_overlap_mass.max(dx * overlap);
    }
}

/// Summary of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub steps: usize,
    pub wall_time: Duration,
    pub ledger: InvariantLedger,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Grid1D,
    pub epsilon: f64,
    pub growth: GrowthPair,
    pub snapshots: Vec<Snapshot>,
    pub report: RunReport,
}

impl Trajectory {
    pub fn initial(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory always holds the initial snapshot")
    }

    /// Snapshot whose time is closest to `t`.
    pub fn at(&self, t: f64) -> &Snapshot {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.time - t).abs().total_cmp(&(b.time - t).abs()))
            .expect("trajectory always holds the initial snapshot")
    }
}

pub fn run(config: &SimConfig) -> Result<Trajectory> {
    run_with(config, |_, _| {})
}

/// Runs the simulation, calling `observer` after every step with the new state.
pub fn run_with<F>(config: &SimConfig, mut observer: F) -> Result<Trajectory>
where
    F: FnMut(&TwoSpeciesState, &StepReport),
{
    config.validate()?;
    let started = Instant::now();
    let grid = config.grid()?;
    let dx = grid.cell_width();
    let eps = config.epsilon;
    let pair = &config.growth;
    let m = grid.num_cells();

    let mut state = init_from_preset(&grid, config.preset, eps)?;
    let mut next = state.clone();
    let mut integrals = TimeIntegrals::zeros(m);
    let mut ws = Workspace::new(m);
    let mut ledger = InvariantLedger::new();
    ledger.observe_state(&state, dx);

    let times = config.output.times(config.t_max);
    let mut snapshots = Vec::with_capacity(times.len());
    let mut emit = |state: &TwoSpeciesState, p: &[f64], integrals: &TimeIntegrals| {
        let mut snap = Snapshot::from_parts(grid.centers().to_vec(), state, p.to_vec());
        snap.integrals = Some(integrals.clone());
        snapshots.push(snap);
    };

    let mut steps = 0usize;
    ws.prepare(&state, pair, eps, dx)?;
    let mut pending = times.iter().copied().peekable();
    while let Some(&target) = pending.peek() {
        if state.time >= target {
            emit(&state, &ws.p, &integrals);
            pending.next();
            continue;
        }
        let bound = ws.stable_dt(config.cfl, dx);
        let remaining = target - state.time;
        // land exactly on the output time; avoid a sliver step right after it
        let dt = if bound >= remaining {
            remaining
        } else if bound * 1.5 > remaining {
            0.5 * remaining
        } else {
            bound
        };
        let report = ws
            .update(&state, pair, dt, dx, &mut next, Some(&mut integrals))
            .map_err(|e| with_step(e, steps + 1))?;
        if bound >= remaining {
            next.time = target;
        }
        steps += 1;
        std::mem::swap(&mut state, &mut next);
        ledger.max_ledger_residual = ledger.max_ledger_residual.max(report.ledger_residual());
        ledger.min_dt = ledger.min_dt.min(dt);
        ledger.observe_state(&state, dx);
        observer(&state, &report);
        ws.prepare(&state, pair, eps, dx).map_err(|e| with_step(e, steps))?;
    }

    Ok(Trajectory {
        grid,
        epsilon: eps,
        growth: *pair,
        snapshots,
        report: RunReport {
            steps,
            wall_time: started.elapsed(),
            ledger,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::GrowthModel;

    fn inert() -> GrowthPair {
        GrowthPair::new(GrowthModel::raw(0.0, 1.0), GrowthModel::raw(0.0, 1.0))
    }

    #[test]
    fn velocities_examples() {
        let u = face_velocities(&[0.3; 6], 0.1);
        assert!(u.values().iter().all(|&v| v == 0.0));
        let u = face_velocities(&[0.0, 1.0, 0.0], 1.0);
        assert_eq!(u.values(), &[0.0, -1.0, 1.0, 0.0]);
        let u = face_velocities(&[5.0, 4.0, 2.5, 2.5, 1.0], 0.5);
        assert_eq!(u.len(), 6);
        assert!(u.values().iter().all(|&v| v >= 0.0));
        assert_eq!(u[0], 0.0);
        assert_eq!(u[5], 0.0);
    }

    #[test]
    fn flux_examples() {
        let n = [0.1, 0.5, 0.9, 0.2];
        let zero = FaceField::zeros(4);
        assert!(upwind_flux(&n, &zero).unwrap().values().iter().all(|&v| v == 0.0));

        let u = FaceField(vec![0.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(upwind_flux(&n, &u).unwrap()[2], 1.0);
        let u = FaceField(vec![0.0, 0.0, -2.0, 0.0, 0.0]);
        assert_eq!(upwind_flux(&n, &u).unwrap()[2], -1.8);

        assert!(upwind_flux(&n, &FaceField::zeros(3)).is_err());
    }

    #[test]
    fn stable_dt_examples() {
        let pair = GrowthPair::grfig();
        let uniform = TwoSpeciesState::new(0.0, vec![0.5; 10], vec![0.0; 10]).unwrap();
        let dt = stable_dt(&uniform, &pair, 1.0, 0.9, 0.05).unwrap();
        // diffusion 0.0025 / 4, advection infinite, reaction 1/|G(1)| = 1/10
        assert!((dt - 0.9 * 0.0025 / 4.0).abs() < 1e-15);

        let empty = TwoSpeciesState::new(0.0, vec![0.0; 10], vec![0.0; 10]).unwrap();
        let dt = stable_dt(&empty, &pair, 1.0, 0.9, 0.05).unwrap();
        assert!((dt - 0.9 / 10.0).abs() < 1e-15);

        let eps = 0.001;
        let plateau = crate::constitutive::density_of_pressure(2.0, eps).unwrap();
        let uniform = TwoSpeciesState::new(0.0, vec![plateau; 10], vec![0.0; 10]).unwrap();
        let dx = 0.1;
        let dt = stable_dt(&uniform, &pair, eps, 0.9, dx).unwrap();
        let slope = plateau * (2.0 + eps) * (2.0 + eps) / eps;
        assert!((slope - 4004.0).abs() < 3.0);
        assert!((dt - 0.9 * dx * dx / (2.0 * slope)).abs() < 1e-12 * dt);

        assert!(stable_dt(&uniform, &pair, eps, 1.5, dx).is_err());
        assert!(stable_dt(&uniform, &pair, eps, 0.0, dx).is_err());
    }

    #[test]
    fn inert_uniform_state_is_fixed_point() {
        let s = TwoSpeciesState::new(0.0, vec![0.3; 8], vec![0.4; 8]).unwrap();
        let (next, report) = step(&s, &inert(), 1.0, 1e-3, 0.1).unwrap();
        assert_eq!(next.n1, s.n1);
        assert_eq!(next.n2, s.n2);
        assert_eq!(next.time, 1e-3);
        assert_eq!(report.reaction_integral, 0.0);
    }

    /// Single step recomputed with scalar arithmetic over the six faces.
    #[test]
    fn five_cell_step_matches_scalar_oracle() {
        let n1 = [0.5, 0.5, 0.0, 0.0, 0.0];
        let n2 = [0.0, 0.0, 0.5, 0.5, 0.5];
        let (eps, dt, dx) = (1.0f64, 1e-3f64, 1.0f64);
        let g1 = |p: f64| 10.0 * (1.0 - p / 2.0);
        let g2 = |p: f64| 10.0 * (1.0 - p);

        let mut p = [0.0; 5];
        for j in 0..5 {
            let n = n1[j] + n2[j];
            p[j] = eps * n / (1.0 - n);
        }
        let mut u = [0.0; 6];
        for f in 1..5 {
            u[f] = -(p[f] - p[f - 1]) / dx;
        }
        let flux = |n: &[f64; 5], f: usize| -> f64 {
            if f == 0 || f == 5 {
                return 0.0;
            }
            let plus = if u[f] > 0.0 { u[f] } else { 0.0 };
            let minus = if u[f] < 0.0 { u[f] } else { 0.0 };
            plus * n[f - 1] + minus * n[f]
        };
        let mut e1 = [0.0; 5];
        let mut e2 = [0.0; 5];
        for j in 0..5 {
            e1[j] = n1[j] - dt / dx * (flux(&n1, j + 1) - flux(&n1, j)) + dt * n1[j] * g1(p[j]);
            e2[j] = n2[j] - dt / dx * (flux(&n2, j + 1) - flux(&n2, j)) + dt * n2[j] * g2(p[j]);
        }
        // uniform pressure 1 everywhere: no transport, pure growth
        assert!(u.iter().all(|&v| v == 0.0));

        let s = TwoSpeciesState::new(0.0, n1.to_vec(), n2.to_vec()).unwrap();
        let (next, _) = step(&s, &GrowthPair::grfig(), eps, dt, dx).unwrap();
        for j in 0..5 {
            assert!((next.n1[j] - e1[j]).abs() <= 1e-14);
            assert!((next.n2[j] - e2[j]).abs() <= 1e-14);
        }
        // frozen values: 0.5 (1 + 1e-3 * 5) and 0.5 (1 + 1e-3 * 0)
        assert!((next.n1[0] - 0.5025).abs() <= 1e-14);
        assert!((next.n2[4] - 0.5).abs() <= 1e-14);
    }

    /// Same oracle on data with genuine transport across every interior face.
    #[test]
    fn five_cell_step_with_transport_matches_scalar_oracle() {
        let n1 = [0.6, 0.45, 0.0, 0.0, 0.0];
        let n2 = [0.0, 0.0, 0.5, 0.3, 0.2];
        let (eps, dt, dx) = (1.0f64, 1e-3f64, 1.0f64);
        let g1 = |p: f64| 10.0 * (1.0 - p / 2.0);
        let g2 = |p: f64| 10.0 * (1.0 - p);
        let mut p = [0.0; 5];
        for j in 0..5 {
            let n = n1[j] + n2[j];
            p[j] = eps * n / (1.0 - n);
        }
        let mut u = [0.0; 6];
        for f in 1..5 {
            u[f] = -(p[f] - p[f - 1]) / dx;
        }
        let flux = |n: &[f64; 5], f: usize| -> f64 {
            if f == 0 || f == 5 {
                return 0.0;
            }
            if u[f] >= 0.0 {
                u[f] * n[f - 1]
            } else {
                u[f] * n[f]
            }
        };
        let s = TwoSpeciesState::new(0.0, n1.to_vec(), n2.to_vec()).unwrap();
        let (next, report) = step(&s, &GrowthPair::grfig(), eps, dt, dx).unwrap();
        for j in 0..5 {
            let e1 = n1[j] - dt / dx * (flux(&n1, j + 1) - flux(&n1, j)) + dt * n1[j] * g1(p[j]);
            let e2 = n2[j] - dt / dx * (flux(&n2, j + 1) - flux(&n2, j)) + dt * n2[j] * g2(p[j]);
            assert!((next.n1[j] - e1).abs() <= 1e-14, "n1[{j}]");
            assert!((next.n2[j] - e2).abs() <= 1e-14, "n2[{j}]");
        }
        assert!(report.ledger_residual() <= 1e-12);
        assert!(u[1..5].iter().all(|&v| v != 0.0));
    }

    #[test]
    fn mass_identity_telescopes() {
        let n1: Vec<f64> = (0..40).map(|j| if j < 20 { 0.2 + 0.01 * j as f64 } else { 0.0 }).collect();
        let n2: Vec<f64> = (0..40).map(|j| if j >= 20 { 0.7 - 0.01 * (j - 20) as f64 } else { 0.0 }).collect();
        let s = TwoSpeciesState::new(0.0, n1, n2).unwrap();
        let pair = GrowthPair::grfig();
        let dx = 0.25;
        let dt = stable_dt(&s, &pair, 0.5, 0.9, dx).unwrap();
        let (next, report) = step(&s, &pair, 0.5, dt, dx).unwrap();
        let before: f64 = s.total().sum();
        let after: f64 = next.total().sum();
        let reaction: f64 = report.reaction_integral / dx;
        assert!((after - before - reaction).abs() <= 1e-12 * before);
    }

    #[test]
    fn oversized_step_is_a_hard_error() {
        let s = TwoSpeciesState::new(0.0, vec![0.9, 0.9, 0.0, 0.0], vec![0.0; 4]).unwrap();
        match step(&s, &GrowthPair::grfig(), 1.0, 10.0, 0.1) {
            Err(Error::Stability { .. }) => {}
            other => panic!("expected stability failure, got {other:?}"),
        }
    }

    #[test]
    fn zero_horizon_run_keeps_initial_snapshot() {
        let mut cfg = SimConfig::new(Preset::TwoBlock, 1.0, GrowthPair::grfig());
        cfg.t_max = 0.0;
        cfg.num_cells = 50;
        let traj = run(&cfg).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(traj.report.steps, 0);
        assert_eq!(traj.snapshots[0].time, 0.0);
    }

    #[test]
    fn schedule_times() {
        assert_eq!(OutputSchedule::Count(3).times(2.0), vec![0.0, 1.0, 2.0]);
        assert_eq!(
            OutputSchedule::Times(vec![0.5, 0.1, 5.0]).times(1.0),
            vec![0.0, 0.1, 0.5, 1.0]
        );
        assert_eq!(OutputSchedule::Count(7).times(0.0), vec![0.0]);
    }

    #[test]
    fn run_is_deterministic_and_hits_output_times() {
        let mut cfg = SimConfig::new(Preset::TwoBlock, 1.0, GrowthPair::grfig());
        cfg.num_cells = 60;
        cfg.t_max = 0.2;
        cfg.output = OutputSchedule::Count(5);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.snapshots, b.snapshots);
        let times: Vec<f64> = a.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0.0, 0.05, 0.1, 0.15000000000000002, 0.2]);
        assert!(a.report.ledger.max_ledger_residual <= 1e-12);
    }
}
