//! Plain comma-separated output: snapshots, diagnostics, sweep reports and
//! oracle series.
//!
//! Floats are written in their shortest round-trip decimal form (at most 17
//! significant digits), so reading a file back reproduces the arrays bit for
//! bit. Missing values are written as `NaN`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostics::{diagnostics_series, DiagnosticsRecord, TimeQuadrature};
use crate::error::{Error, Result};
use crate::grid::{Snapshot, TwoSpeciesState};
use crate::oracle::{InterfaceTrajectory, LimitProfile};
use crate::solver::Trajectory;
use crate::sweep::SweepResult;

pub const SNAPSHOT_HEADER: &str = "t,x,n1,n2,p";
pub const DIAGNOSTICS_HEADER: &str =
    "t,zeta,overlap_max,overlap_mass,mass1,mass2,max_n,max_p,comp_residual_l1";
pub const SWEEP_HEADER: &str = "epsilon,num_cells,step_count,probe_time,plateau_left,\
plateau_right,zeta,l1_to_limit,comp_residual_l1";
pub const PROBES_HEADER: &str =
    "t,plateau_left,plateau_right,zeta,l1_to_limit,comp_residual_l1";

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn row(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

pub fn format_snapshot(snap: &Snapshot) -> String {
    let mut out = String::with_capacity(64 * snap.x.len());
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for j in 0..snap.x.len() {
        row(&mut out, &[snap.time, snap.x[j], snap.n1[j], snap.n2[j], snap.p[j]]);
    }
    out
}

pub fn write_snapshot(snap: &Snapshot, path: &Path) -> Result<()> {
    fs::write(path, format_snapshot(snap))?;
    Ok(())
}

/// Parses snapshot text. `path` is only used in error messages; rows are
/// numbered from 1 at the header.
pub fn parse_snapshot(text: &str, path: &Path) -> Result<Snapshot> {
    let bad = |row: usize, message: String| Error::SnapshotFormat {
        path: path.to_path_buf(),
        row,
        message,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SNAPSHOT_HEADER => {}
        Some(h) => return Err(bad(1, format!("expected header '{SNAPSHOT_HEADER}', got '{h}'"))),
        None => return Err(bad(1, "empty file".into())),
    }
    let (mut x, mut n1, mut n2, mut p) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut time: Option<f64> = None;
    for (i, line) in lines.enumerate() {
        let r = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(bad(r, format!("expected 5 fields, got {}", fields.len())));
        }
        let mut v = [0.0f64; 5];
        for (k, f) in fields.iter().enumerate() {
            v[k] = f
                .trim()
                .parse()
                .map_err(|_| bad(r, format!("malformed number '{f}'")))?;
        }
        match time {
            None => time = Some(v[0]),
            Some(t) if t.to_bits() != v[0].to_bits() => {
                return Err(bad(r, format!("time {} differs from {t}", v[0])))
            }
            _ => {}
        }
        if let Some(&prev) = x.last() {
            if !(v[1] > prev) {
                return Err(bad(r, "cell centres must increase".into()));
            }
        }
        x.push(v[1]);
        n1.push(v[2]);
        n2.push(v[3]);
        p.push(v[4]);
    }
    let time = time.ok_or_else(|| bad(2, "no data rows".into()))?;
    let state = TwoSpeciesState::new(time, n1, n2)?;
    Ok(Snapshot::from_parts(x, &state, p))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    parse_snapshot(&fs::read_to_string(path)?, path)
}

pub fn format_diagnostics(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::new();
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in records {
        row(
            &mut out,
            &[
                r.time,
                opt(r.interface_position),
                r.overlap_max,
                r.overlap_mass,
                r.mass1,
                r.mass2,
                r.max_n,
                r.max_p,
                opt(r.complementary_l1),
            ],
        );
    }
    out
}

pub fn write_diagnostics(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    fs::write(path, format_diagnostics(records))?;
    Ok(())
}

/// Files produced by [`write_trajectory`].
#[derive(Debug, Clone)]
pub struct WrittenRun {
    pub snapshots: Vec<PathBuf>,
    pub diagnostics: PathBuf,
}

/// Writes `snapshot_000.csv`, `snapshot_001.csv`, ... and `diagnostics.csv`
/// into `dir`, creating it if needed.
pub fn write_trajectory(traj: &Trajectory, dir: &Path) -> Result<WrittenRun> {
    fs::create_dir_all(dir)?;
    let mut snapshots = Vec::with_capacity(traj.snapshots.len());
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{k:03}.csv"));
        write_snapshot(snap, &path)?;
        snapshots.push(path);
    }
    let diagnostics = dir.join("diagnostics.csv");
    write_diagnostics(
        &diagnostics_series(traj, TimeQuadrature::SolverSteps),
        &diagnostics,
    )?;
    Ok(WrittenRun {
        snapshots,
        diagnostics,
    })
}

/// One row per epsilon, measured at the last probe time. Wall times are kept
/// out so the bytes depend only on the inputs; see [`format_sweep_timing`].
pub fn format_sweep_report(result: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for rec in &result.records {
        let Some(probe) = rec.last_probe() else {
            continue;
        };
        row(
            &mut out,
            &[
                rec.epsilon,
                rec.num_cells as f64,
                rec.step_count as f64,
                probe.time,
                probe.plateau_density_left,
                probe.plateau_density_right,
                opt(probe.interface_position),
                opt(probe.l1_distance_to_limit),
                opt(probe.complementary_residual_l1),
            ],
        );
    }
    out
}

pub fn format_sweep_timing(result: &SweepResult) -> String {
    let mut out = String::from("epsilon,num_cells,wall_seconds\n");
    for rec in &result.records {
        row(
            &mut out,
            &[rec.epsilon, rec.num_cells as f64, rec.wall_time.as_secs_f64()],
        );
    }
    out
}

/// All probe times of one rung.
pub fn format_probes(result: &SweepResult, rung: usize) -> String {
    let mut out = String::new();
    out.push_str(PROBES_HEADER);
    out.push('\n');
    if let Some(rec) = result.records.get(rung) {
        for p in &rec.probes {
            row(
                &mut out,
                &[
                    p.time,
                    p.plateau_density_left,
                    p.plateau_density_right,
                    opt(p.interface_position),
                    opt(p.l1_distance_to_limit),
                    opt(p.complementary_residual_l1),
                ],
            );
        }
    }
    out
}

/// Directory name used for one rung of a sweep.
pub fn rung_dir_name(epsilon: f64) -> String {
    format!("eps_{epsilon}")
}

pub fn format_interface_series(traj: &InterfaceTrajectory) -> String {
    let mut out = String::from("t,r1\n");
    for &(t, r) in &traj.samples {
        row(&mut out, &[t, r]);
    }
    out
}

pub fn format_limit_profile(x: &[f64], profile: &LimitProfile) -> String {
    let mut out = String::from("x,n1,n2,p\n");
    for (j, &xj) in x.iter().enumerate() {
        row(&mut out, &[xj, profile.n1[j], profile.n2[j], profile.p[j]]);
    }
    out
}
