//! Epsilon ladder for the incompressible limit.
//!
//! Each rung is an independent solver run; rungs are dispatched in parallel
//! and merged back in ladder order.

use std::time::Duration;

use rayon::prelude::*;

use crate::diagnostics::{complementary_residual, interface_position, TimeQuadrature};
use crate::error::{Error, Result};
use crate::grid::{Preset, Snapshot};
use crate::oracle::{integrate_interface, limit_profile, InterfaceTrajectory, SpheroidParams};
use crate::solver::{run, OutputSchedule, SimConfig, Trajectory};

/// Step used to integrate the interface ODE for the spheroid reference.
const ORACLE_DT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Preset, growth, domain, cfl and horizon shared by every rung.
    pub base: SimConfig,
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Cells per rung; empty means `base.num_cells` everywhere.
    pub cells: Vec<usize>,
    pub probe_times: Vec<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(Error::Config("epsilon ladder is empty".into()));
        }
        if self.epsilons.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::Config("every epsilon must be positive".into()));
        }
        if self.epsilons.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("epsilon ladder must be strictly decreasing".into()));
        }
        if !self.cells.is_empty() && self.cells.len() != self.epsilons.len() {
            return Err(Error::Config(format!(
                "{} resolutions for {} epsilons",
                self.cells.len(),
                self.epsilons.len()
            )));
        }
        if self.probe_times.iter().any(|&t| t < 0.0 || t > self.base.t_max) {
            return Err(Error::Config(format!(
                "probe times must lie in [0, {}]",
                self.base.t_max
            )));
        }
        Ok(())
    }

    fn rung(&self, i: usize) -> SimConfig {
        let mut cfg = self.base.clone();
        cfg.epsilon = self.epsilons[i];
        if let Some(&m) = self.cells.get(i) {
            cfg.num_cells = m;
        }
        let mut times = match &cfg.output {
            OutputSchedule::Times(ts) => ts.clone(),
            other => other.times(cfg.t_max),
        };
        times.extend_from_slice(&self.probe_times);
        cfg.output = OutputSchedule::Times(times);
        cfg
    }
}

/// Metrics of one rung at one probe time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeMetrics {
    pub time: f64,
    /// Median total density over cells where species 1 exceeds half its maximum.
    pub plateau_density_left: f64,
    /// Same for species 2.
    pub plateau_density_right: f64,
    pub interface_position: Option<f64>,
    pub l1_distance_to_limit: Option<f64>,
    pub complementary_residual_l1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub num_cells: usize,
    pub probes: Vec<ProbeMetrics>,
    pub step_count: usize,
    pub wall_time: Duration,
}

impl SweepRecord {
    pub fn probe(&self, t: f64) -> Option<&ProbeMetrics> {
        self.probes.iter().find(|p| (p.time - t).abs() <= 1e-12 * t.abs().max(1.0))
    }

    pub fn last_probe(&self) -> Option<&ProbeMetrics> {
        self.probes.last()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub preset: Preset,
    /// In ladder order (epsilon strictly decreasing).
    pub records: Vec<SweepRecord>,
}

/// Median of `n1 + n2` over the cells where `species` exceeds half its maximum.
pub fn plateau_density(snap: &Snapshot, species: &[f64]) -> f64 {
    let peak = species.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return 0.0;
    }
    let mut values: Vec<f64> = species
        .iter()
        .zip(snap.total())
        .filter(|(&s, _)| s > 0.5 * peak)
        .map(|(_, n)| n)
        .collect();
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Reference for the L1 distance: saturated indicators split at one front
/// (two-block) or the Hele-Shaw spheroid at the integrated radius.
enum LimitReference {
    Front(Vec<Option<f64>>),
    Spheroid(SpheroidParams, InterfaceTrajectory),
}

fn l1_to_indicator(snap: &Snapshot, inside1: impl Fn(f64) -> bool) -> f64 {
    let dx = snap.cell_width();
    dx * snap
        .x
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let (r1, r2) = if inside1(x) { (1.0, 0.0) } else { (0.0, 1.0) };
            (snap.n1[j] - r1).abs() + (snap.n2[j] - r2).abs()
        })
        .sum::<f64>()
}

fn l1_distance(reference: &LimitReference, probe_index: usize, snap: &Snapshot) -> Option<f64> {
    match reference {
        LimitReference::Front(fronts) => {
            let front = fronts.get(probe_index).copied().flatten()?;
            Some(l1_to_indicator(snap, |x| x <= front))
        }
        LimitReference::Spheroid(params, ode) => {
            let radius = ode.radius_at(snap.time)?;
            if ode.halted.is_some() && snap.time > ode.samples.last()?.0 {
                return None;
            }
            let grid = crate::grid::make_grid(params.half_length, snap.len()).ok()?;
            let lim = limit_profile(&params.with_radius(radius), &grid).ok()?;
            let dx = snap.cell_width();
            Some(
                dx * (0..snap.len())
                    .map(|j| (snap.n1[j] - lim.n1[j]).abs() + (snap.n2[j] - lim.n2[j]).abs())
                    .sum::<f64>(),
            )
        }
    }
}

fn snapshot_at(traj: &Trajectory, t: f64) -> Result<&Snapshot> {
    let snap = traj.at(t);
    if (snap.time - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(Error::Config(format!("no snapshot at probe time {t}")));
    }
    Ok(snap)
}

fn measure(
    traj: &Trajectory,
    probe_times: &[f64],
    reference: &LimitReference,
) -> Result<Vec<ProbeMetrics>> {
    probe_times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let snap = snapshot_at(traj, t)?;
            Ok(ProbeMetrics {
                time: snap.time,
                plateau_density_left: plateau_density(snap, &snap.n1),
                plateau_density_right: plateau_density(snap, &snap.n2),
                interface_position: interface_position(&snap.state(), &snap.x).ok(),
                l1_distance_to_limit: l1_distance(reference, i, snap),
                complementary_residual_l1: complementary_residual(
                    traj,
                    traj.epsilon,
                    &traj.growth,
                    snap.time,
                    TimeQuadrature::SolverSteps,
                )
                .ok()
                .map(|r| r.norm_l1),
            })
        })
        .collect()
}

fn sorted_probes(times: &[f64]) -> Vec<f64> {
    let mut t = times.to_vec();
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    run_sweep_keeping(config).0
}

/// Like [`run_sweep`], also handing back every completed trajectory in
/// ladder order.
pub fn run_sweep_keeping(config: &SweepConfig) -> (Result<SweepResult>, Vec<Trajectory>) {
    if let Err(e) = config.validate().and_then(|_| config.base.validate()) {
        return (Err(e), Vec::new());
    }
    let probe_times = sorted_probes(&config.probe_times);

    let outcomes: Vec<Result<Trajectory>> = (0..config.epsilons.len())
        .into_par_iter()
        .map(|i| run(&config.rung(i)))
        .collect();

    let mut trajectories = Vec::with_capacity(outcomes.len());
    let mut failure = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(traj) => trajectories.push(traj),
            Err(e) => {
                failure = Some((config.epsilons[i], e));
                break;
            }
        }
    }

    let result = summarize(config, &probe_times, &trajectories);
    let result = match (result, failure) {
        (Err(e), _) => Err(e),
        (Ok(result), None) => Ok(result),
        (Ok(result), Some((epsilon, source))) => Err(Error::SweepAborted {
            epsilon,
            source: Box::new(source),
            partial: Box::new(result),
        }),
    };
    (result, trajectories)
}

fn summarize(
    config: &SweepConfig,
    probe_times: &[f64],
    trajectories: &[Trajectory],
) -> Result<SweepResult> {
    let preset = config.base.preset;
    let reference = match preset {
        Preset::Spheroid => {
            let g = &config.base.growth;
            let params = SpheroidParams::new(
                g.species1.gain,
                g.species2.gain,
                g.species1.homeostatic_pressure,
                g.species2.homeostatic_pressure,
                config.base.half_length,
                Preset::SPHEROID_RADIUS,
            )?;
            let horizon = probe_times.last().copied().unwrap_or(0.0);
            let ode = integrate_interface(&params, horizon, ORACLE_DT)?;
            LimitReference::Spheroid(params, ode)
        }
        Preset::TwoBlock => {
            // fronts of the smallest epsilon that completed
            let fronts = match trajectories.last() {
                Some(finest) => probe_times
                    .iter()
                    .map(|&t| {
                        snapshot_at(finest, t)
                            .ok()
                            .and_then(|s| interface_position(&s.state(), &s.x).ok())
                    })
                    .collect(),
                None => Vec::new(),
            };
            LimitReference::Front(fronts)
        }
    };

    let records = trajectories
        .iter()
        .map(|traj| {
            Ok(SweepRecord {
                epsilon: traj.epsilon,
                num_cells: traj.grid.num_cells(),
                probes: measure(traj, probe_times, &reference)?,
                step_count: traj.report.steps,
                wall_time: traj.report.wall_time,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { preset, records })
}

/// One row of the convergence table, measured at the last probe time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub epsilon: f64,
    pub num_cells: usize,
    pub time: f64,
    pub l1_distance_to_limit: Option<f64>,
    pub complementary_residual_l1: Option<f64>,
    /// `metric(this row) / metric(previous row)`; absent on the first row.
    pub l1_ratio: Option<f64>,
    pub complementary_ratio: Option<f64>,
}

pub fn convergence_table(result: &SweepResult) -> Vec<TableRow> {
    let mut records: Vec<&SweepRecord> = result.records.iter().collect();
    records.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let ratio = |now: Option<f64>, before: Option<f64>| match (now, before) {
        (Some(a), Some(b)) if b != 0.0 => Some(a / b),
        _ => None,
    };
    let mut rows: Vec<TableRow> = Vec::with_capacity(records.len());
    for rec in records {
        let probe = rec.last_probe();
        let l1 = probe.and_then(|p| p.l1_distance_to_limit);
        let comp = probe.and_then(|p| p.complementary_residual_l1);
        let prev = rows.last();
        rows.push(TableRow {
            epsilon: rec.epsilon,
            num_cells: rec.num_cells,
            time: probe.map(|p| p.time).unwrap_or(f64::NAN),
            l1_distance_to_limit: l1,
            complementary_residual_l1: comp,
            l1_ratio: prev.and_then(|r| ratio(l1, r.l1_distance_to_limit)),
            complementary_ratio: prev.and_then(|r| ratio(comp, r.complementary_residual_l1)),
        });
    }
    rows
}
