//! One-dimensional finite-volume simulator for two segregated cell
//! populations sharing a singular pressure law `p = eps n / (1 - n)`,
//! together with tools to study the incompressible limit `eps -> 0`:
//! closed-form Hele-Shaw spheroid oracles, runtime residuals of the limit
//! relations, and an epsilon-sweep harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod constitutive;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod solver;
pub mod sweep;

pub use constitutive::{GrowthModel, GrowthPair, PressureLaw};
pub use error::{Error, Result};
pub use grid::{make_grid, init_from_preset, Grid1D, Preset, Snapshot, TwoSpeciesState};
pub use solver::{run, OutputSchedule, SimConfig, Trajectory};
