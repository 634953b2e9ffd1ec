//! Mesh, simulation state, and snapshot containers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Uniform cell-centered mesh on `(-L, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    half_length: f64,
    num_cells: usize,
    cell_width: f64,
    centers: Vec<f64>,
}

impl Grid1D {
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Position of face `j + 1/2`, `j = 0..=M`.
    pub fn face(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.cell_width
    }
}

pub fn make_grid(half_length: f64, num_cells: usize) -> Result<Grid1D> {
    if !(half_length > 0.0) || !half_length.is_finite() {
        return Err(Error::Config(format!(
            "half length must be positive, got {half_length}"
        )));
    }
    if num_cells < 3 {
        return Err(Error::Config(format!(
            "at least 3 cells required, got {num_cells}"
        )));
    }
    let cell_width = 2.0 * half_length / num_cells as f64;
    let centers = (0..num_cells)
        .map(|j| -half_length + (j as f64 + 0.5) * cell_width)
        .collect();
    Ok(Grid1D {
        half_length,
        num_cells,
        cell_width,
        centers,
    })
}

/// Initial-data presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `n1 = 0.98` left of `x = 0.25`, `n2 = 0.98` right of it.
    TwoBlock,
    /// `n1 = 0.5` on `|x| <= 0.5`, `n2 = 0.5` on the rest of the domain.
    Spheroid,
}

impl Preset {
    pub const TWOBLOCK_DENSITY: f64 = 0.98;
    pub const TWOBLOCK_INTERFACE: f64 = 0.25;
    pub const SPHEROID_DENSITY: f64 = 0.5;
    pub const SPHEROID_RADIUS: f64 = 0.5;

    pub fn name(&self) -> &'static str {
        match self {
            Preset::TwoBlock => "twoblock",
            Preset::Spheroid => "spheroid",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "twoblock" => Ok(Preset::TwoBlock),
            "spheroid" => Ok(Preset::Spheroid),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }
}

/// Per-cell densities of both species at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpeciesState {
    pub time: f64,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
}

impl TwoSpeciesState {
    pub fn new(time: f64, n1: Vec<f64>, n2: Vec<f64>) -> Result<Self> {
        if n1.len() != n2.len() {
            return Err(Error::Config(format!(
                "species arrays differ in length ({} vs {})",
                n1.len(),
                n2.len()
            )));
        }
        Ok(Self { time, n1, n2 })
    }

    pub fn len(&self) -> usize {
        self.n1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n1.is_empty()
    }

    pub fn total(&self) -> impl Iterator<Item = f64> + '_ {
        self.n1.iter().zip(&self.n2).map(|(a, b)| a + b)
    }

    pub fn pressure(&self, epsilon: f64) -> Result<Vec<f64>> {
        self.total()
            .map(|n| crate::constitutive::pressure(n, epsilon))
            .collect()
    }

    pub fn mass1(&self, dx: f64) -> f64 {
        dx * self.n1.iter().sum::<f64>()
    }

    pub fn mass2(&self, dx: f64) -> f64 {
        dx * self.n2.iter().sum::<f64>()
    }
}

/// Builds the initial state of a preset on `grid`.
pub fn init_from_preset(grid: &Grid1D, preset: Preset, epsilon: f64) -> Result<TwoSpeciesState> {
    if !(epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be positive, got {epsilon}")));
    }
    let m = grid.num_cells();
    // centers landing on an interface within rounding count as inside
    let slack = 1e-9 * grid.cell_width();
    let mut n1 = vec![0.0; m];
    let mut n2 = vec![0.0; m];
    for (j, &x) in grid.centers().iter().enumerate() {
        match preset {
            Preset::TwoBlock => {
                if x <= Preset::TWOBLOCK_INTERFACE + slack {
                    n1[j] = Preset::TWOBLOCK_DENSITY;
                } else {
                    n2[j] = Preset::TWOBLOCK_DENSITY;
                }
            }
            Preset::Spheroid => {
                if x.abs() <= Preset::SPHEROID_RADIUS + slack {
                    n1[j] = Preset::SPHEROID_DENSITY;
                } else {
                    n2[j] = Preset::SPHEROID_DENSITY;
                }
            }
        }
    }
    if let Some(j) = n1.iter().zip(&n2).position(|(a, b)| a + b >= 1.0) {
        return Err(Error::Config(format!("initial density reaches 1 in cell {j}")));
    }
    TwoSpeciesState::new(0.0, n1, n2)
}

/// True when no cell carries both species.
pub fn disjoint_supports(state: &TwoSpeciesState) -> bool {
    state.n1.iter().zip(&state.n2).all(|(a, b)| a * b == 0.0)
}

/// Index of the last species-1 cell when the state is split by a single
/// interface (species 1 on the left, species 2 on the right).
pub fn segregation_front(state: &TwoSpeciesState) -> Option<usize> {
    if !disjoint_supports(state) {
        return None;
    }
    let last1 = state.n1.iter().rposition(|&v| v > 0.0)?;
    let first2 = state.n2.iter().position(|&v| v > 0.0)?;
    (last1 < first2).then_some(last1)
}

/// Scalar diagnostics carried by every snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotSummary {
    pub mass1: f64,
    pub mass2: f64,
    pub interface: Option<f64>,
    pub overlap_max: f64,
}

/// Running time integrals of the pressure and of the total reaction term,
/// accumulated step by step by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeIntegrals {
    pub pressure: Vec<f64>,
    pub growth: Vec<f64>,
}

impl TimeIntegrals {
    pub fn zeros(m: usize) -> Self {
        Self {
            pressure: vec![0.0; m],
            growth: vec![0.0; m],
        }
    }
}

/// Output record: the state on the mesh at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub x: Vec<f64>,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    pub p: Vec<f64>,
    pub summary: SnapshotSummary,
    /// Present on snapshots emitted by the solver; absent on files read back.
    pub integrals: Option<TimeIntegrals>,
}

impl Snapshot {
    pub fn from_state(grid: &Grid1D, state: &TwoSpeciesState, epsilon: f64) -> Result<Self> {
        let p = state.pressure(epsilon)?;
        Ok(Self::from_parts(grid.centers().to_vec(), state, p))
    }

    pub(crate) fn from_parts(x: Vec<f64>, state: &TwoSpeciesState, p: Vec<f64>) -> Self {
        let dx = if x.len() > 1 { x[1] - x[0] } else { 0.0 };
        let summary = SnapshotSummary {
            mass1: state.mass1(dx),
            mass2: state.mass2(dx),
            interface: crate::diagnostics::interface_position(state, &x).ok(),
            overlap_max: crate::diagnostics::segregation_overlap(state, dx).0,
        };
        Self {
            time: state.time,
            x,
            n1: state.n1.clone(),
            n2: state.n2.clone(),
            p,
            summary,
            integrals: None,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn cell_width(&self) -> f64 {
        if self.x.len() > 1 {
            self.x[1] - self.x[0]
        } else {
            0.0
        }
    }

    pub fn state(&self) -> TwoSpeciesState {
        TwoSpeciesState {
            time: self.time,
            n1: self.n1.clone(),
            n2: self.n2.clone(),
        }
    }

    pub fn total(&self) -> impl Iterator<Item = f64> + '_ {
        self.n1.iter().zip(&self.n2).map(|(a, b)| a + b)
    }
}
