use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "stability failure at step {step}, cell {cell} (t = {time:e}): {reason}"
    )]
    Stability {
        step: usize,
        cell: usize,
        time: f64,
        reason: String,
    },

    #[error("interface undefined: {0}")]
    UndefinedInterface(String),

    #[error("quadrature error: {0}")]
    Quadrature(String),

    #[error("degenerate matching: |lambda| = {0:e}")]
    DegenerateMatching(f64),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed snapshot {path:?}, row {row}: {message}")]
    SnapshotFormat {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("sweep aborted at epsilon = {epsilon}: {source}")]
    SweepAborted {
        epsilon: f64,
        #[source]
        source: Box<Error>,
        /// Records of the rungs that completed before the failing one.
        partial: Box<crate::sweep::SweepResult>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
