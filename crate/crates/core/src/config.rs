//! Line-oriented `key = value` run configuration.
//!
//! ```text
//! # two-block run
//! preset = twoblock
//! epsilon = 1
//! tmax = 2
//! growth = GRfig
//! ```
//!
//! Recognised keys: `preset`, `epsilon`, `L`, `cells`, `cfl`, `tmax`,
//! `snapshots` (count), `snapshot_times` (comma list), `growth` (named pair),
//! `g1`, `p1`, `g2`, `p2`, `output`, `mode`, `epsilons`, `sweep_cells`,
//! `probe_times`, `r0`, `dt_ode`. Blank lines and `#` comments are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::constitutive::{validate_hypotheses, GrowthModel, GrowthPair, HypothesisReport};
use crate::error::{Error, Result};
use crate::grid::{init_from_preset, Preset};
use crate::solver::{OutputSchedule, SimConfig};
use crate::sweep::SweepConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    Sweep,
    Oracle,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "run" => Ok(Mode::Run),
            "sweep" => Ok(Mode::Sweep),
            "oracle" => Ok(Mode::Oracle),
            other => Err(Error::Config(format!("unknown mode '{other}'"))),
        }
    }
}

impl Mode {
    fn as_str(&self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Sweep => "sweep",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub epsilon: f64,
    pub half_length: f64,
    pub num_cells: usize,
    pub cfl: f64,
    pub t_max: f64,
    pub output: OutputSchedule,
    pub growth: GrowthPair,
    pub output_dir: PathBuf,
    pub mode: Mode,
    pub sweep_epsilons: Vec<f64>,
    pub sweep_cells: Vec<usize>,
    pub probe_times: Vec<f64>,
    /// Initial interface radius for the oracle mode.
    pub oracle_radius: f64,
    pub oracle_dt: f64,
}

impl RunConfig {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            preset: self.preset,
            epsilon: self.epsilon,
            half_length: self.half_length,
            num_cells: self.num_cells,
            cfl: self.cfl,
            t_max: self.t_max,
            output: self.output.clone(),
            growth: self.growth,
        }
    }

    pub fn sweep_config(&self) -> SweepConfig {
        let epsilons = if self.sweep_epsilons.is_empty() {
            vec![self.epsilon]
        } else {
            self.sweep_epsilons.clone()
        };
        let probe_times = if self.probe_times.is_empty() {
            vec![self.t_max]
        } else {
            self.probe_times.clone()
        };
        SweepConfig {
            base: self.sim_config(),
            epsilons,
            cells: self.sweep_cells.clone(),
            probe_times,
        }
    }

    /// Checks the growth and initial-data hypotheses for this configuration.
    pub fn hypotheses(&self) -> Result<HypothesisReport> {
        let grid = self.sim_config().grid()?;
        let state = init_from_preset(&grid, self.preset, self.epsilon)?;
        Ok(validate_hypotheses(&self.growth, self.epsilon, &state))
    }

    /// Canonical text form; parsing it yields an equal config.
    pub fn to_config_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let _ = writeln!(out, "preset = {}", self.preset);
        let _ = writeln!(out, "mode = {}", self.mode.as_str());
        let _ = writeln!(out, "epsilon = {}", self.epsilon);
        let _ = writeln!(out, "L = {}", self.half_length);
        let _ = writeln!(out, "cells = {}", self.num_cells);
        let _ = writeln!(out, "cfl = {}", self.cfl);
        let _ = writeln!(out, "tmax = {}", self.t_max);
        match &self.output {
            OutputSchedule::Count(k) => {
                let _ = writeln!(out, "snapshots = {k}");
            }
            OutputSchedule::Times(ts) => {
                let _ = writeln!(out, "snapshot_times = {}", list(ts));
            }
        }
        let _ = writeln!(out, "g1 = {}", self.growth.species1.gain);
        let _ = writeln!(out, "p1 = {}", self.growth.species1.homeostatic_pressure);
        let _ = writeln!(out, "g2 = {}", self.growth.species2.gain);
        let _ = writeln!(out, "p2 = {}", self.growth.species2.homeostatic_pressure);
        let _ = writeln!(out, "output = {}", self.output_dir.display());
        if !self.sweep_epsilons.is_empty() {
            let _ = writeln!(out, "epsilons = {}", list(&self.sweep_epsilons));
        }
        if !self.sweep_cells.is_empty() {
            let cells: Vec<String> = self.sweep_cells.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "sweep_cells = {}", cells.join(", "));
        }
        if !self.probe_times.is_empty() {
            let _ = writeln!(out, "probe_times = {}", list(&self.probe_times));
        }
        let _ = writeln!(out, "r0 = {}", self.oracle_radius);
        let _ = writeln!(out, "dt_ode = {}", self.oracle_dt);
        out
    }
}

const KEYS: &[&str] = &[
    "preset",
    "epsilon",
    "L",
    "cells",
    "cfl",
    "tmax",
    "snapshots",
    "snapshot_times",
    "growth",
    "g1",
    "p1",
    "g2",
    "p2",
    "output",
    "mode",
    "epsilons",
    "sweep_cells",
    "probe_times",
    "r0",
    "dt_ode",
];

struct Entries {
    values: HashMap<&'static str, (usize, String)>,
    last_line: usize,
}

impl Entries {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.values.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn line(&self, key: &str) -> usize {
        self.values.get(key).map(|(l, _)| *l).unwrap_or(0)
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|_| Error::Parse {
                line,
                message: format!("malformed value '{v}' for '{key}'"),
            }),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        match self.get(key) {
            None => Ok(Vec::new()),
            Some((line, v)) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("malformed list entry '{s}' for '{key}'"),
                    })
                })
                .collect(),
        }
    }

    fn fail(&self, key: &str, message: String) -> Error {
        Error::Parse {
            line: self.line(key),
            message,
        }
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut values = HashMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(Error::Parse {
                line,
                message: format!("unknown key '{key}'"),
            });
        };
        if values.insert(known, (line, value.trim().to_string())).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(Entries { values, last_line })
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = tokenize(text)?;
    let (_, preset_text) = e.get("preset").ok_or_else(|| Error::Parse {
        line: e.last_line,
        message: "missing required key 'preset'".into(),
    })?;
    let preset: Preset = preset_text
        .parse()
        .map_err(|err: Error| e.fail("preset", err.to_string()))?;

    let mut growth = match e.get("growth") {
        None => match preset {
            Preset::TwoBlock => GrowthPair::grfig(),
            Preset::Spheroid => GrowthPair::grfig3(),
        },
        Some((line, name)) => GrowthPair::by_name(name).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown growth pair '{name}' (GRfig, GRfig1, GRfig3)"),
        })?,
    };
    growth.species1.gain = e.parsed("g1", growth.species1.gain)?;
    growth.species1.homeostatic_pressure = e.parsed("p1", growth.species1.homeostatic_pressure)?;
    growth.species2.gain = e.parsed("g2", growth.species2.gain)?;
    growth.species2.homeostatic_pressure = e.parsed("p2", growth.species2.homeostatic_pressure)?;
    for (key, value) in [
        ("g1", growth.species1.gain),
        ("p1", growth.species1.homeostatic_pressure),
        ("g2", growth.species2.gain),
        ("p2", growth.species2.homeostatic_pressure),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            let line = if e.get(key).is_some() { e.line(key) } else { e.line("growth") };
            return Err(Error::Parse {
                line,
                message: format!("{key} must be positive, got {value}"),
            });
        }
    }
    growth = GrowthPair::new(
        GrowthModel::new(growth.species1.gain, growth.species1.homeostatic_pressure)?,
        GrowthModel::new(growth.species2.gain, growth.species2.homeostatic_pressure)?,
    );

    let output = match (e.get("snapshots"), e.get("snapshot_times")) {
        (Some(_), Some(_)) => {
            return Err(e.fail("snapshot_times", "give either 'snapshots' or 'snapshot_times'".into()))
        }
        (_, Some(_)) => OutputSchedule::Times(e.list("snapshot_times")?),
        _ => OutputSchedule::Count(e.parsed("snapshots", 7usize)?),
    };

    let config = RunConfig {
        preset,
        epsilon: e.parsed("epsilon", 1.0)?,
        half_length: e.parsed("L", 5.0)?,
        num_cells: e.parsed("cells", 500usize)?,
        cfl: e.parsed("cfl", 0.9)?,
        t_max: e.parsed("tmax", 1.0)?,
        output,
        growth,
        output_dir: PathBuf::from(e.get("output").map(|(_, v)| v).unwrap_or("out")),
        mode: e.parsed("mode", Mode::Run)?,
        sweep_epsilons: e.list("epsilons")?,
        sweep_cells: e.list("sweep_cells")?,
        probe_times: e.list("probe_times")?,
        oracle_radius: e.parsed("r0", Preset::SPHEROID_RADIUS)?,
        oracle_dt: e.parsed("dt_ode", 1e-3)?,
    };
    validate(&config, &e)?;
    Ok(config)
}

fn validate(c: &RunConfig, e: &Entries) -> Result<()> {
    let positive = |key: &str, v: f64| -> Result<()> {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(e.fail(key, format!("{key} must be positive, got {v}")))
        }
    };
    positive("epsilon", c.epsilon)?;
    positive("L", c.half_length)?;
    positive("dt_ode", c.oracle_dt)?;
    positive("r0", c.oracle_radius)?;
    if c.num_cells < 3 {
        return Err(e.fail("cells", format!("cells must be at least 3, got {}", c.num_cells)));
    }
    if !(c.cfl > 0.0 && c.cfl <= 1.0) {
        return Err(e.fail("cfl", format!("cfl must lie in (0, 1], got {}", c.cfl)));
    }
    if !(c.t_max >= 0.0) || !c.t_max.is_finite() {
        return Err(e.fail("tmax", format!("tmax must be nonnegative, got {}", c.t_max)));
    }
    match &c.output {
        OutputSchedule::Count(k) if *k < 1 => {
            return Err(e.fail("snapshots", "snapshots must be at least 1".into()))
        }
        OutputSchedule::Times(ts) if ts.iter().any(|&t| t < 0.0 || t > c.t_max) => {
            return Err(e.fail("snapshot_times", format!("snapshot times must lie in [0, {}]", c.t_max)))
        }
        _ => {}
    }
    if c.sweep_epsilons.iter().any(|&x| !(x > 0.0))
        || c.sweep_epsilons.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(e.fail("epsilons", "epsilons must be positive and strictly decreasing".into()));
    }
    if !c.sweep_cells.is_empty() && c.sweep_cells.len() != c.sweep_epsilons.len() {
        return Err(e.fail("sweep_cells", "sweep_cells must match epsilons in length".into()));
    }
    if c.sweep_cells.iter().any(|&m| m < 3) {
        return Err(e.fail("sweep_cells", "every resolution needs at least 3 cells".into()));
    }
    if c.probe_times.iter().any(|&t| t < 0.0 || t > c.t_max) {
        return Err(e.fail("probe_times", format!("probe times must lie in [0, {}]", c.t_max)));
    }
    if c.mode == Mode::Oracle && c.oracle_radius >= c.half_length {
        return Err(e.fail("r0", "r0 must be below L".into()));
    }
    let report = c.hypotheses().map_err(|err| e.fail("preset", err.to_string()))?;
    if let Some(bad) = report
        .clauses
        .iter()
        .find(|cl| cl.status == crate::constitutive::ClauseStatus::Fail)
    {
        return Err(e.fail("preset", format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(())
}
