//! Error types for the numeric engine. The exact engine has its own
//! `nc::NcError`.

use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),
    #[error("resolution {given} too small (minimum {min})")]
    ResolutionTooSmall { given: u32, min: u32 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bump for chart {chart} is negative at ({x}, {y}): {value}")]
    NegativeBump {
        chart: usize,
        x: f64,
        y: f64,
        value: f64,
    },
    #[error("bumps have a common zero on chart {chart} at ({x}, {y})")]
    CommonZero { chart: usize, x: f64, y: f64 },
    #[error("expected {expected} bumps, got {got}")]
    BumpCount { expected: usize, got: usize },
    #[error("form degree {degree} does not match manifold dimension {dim}")]
    DegreeMismatch { degree: usize, dim: usize },
    #[error("form given on {got} charts, atlas has {expected}")]
    ChartCount { expected: usize, got: usize },
    #[error("cocycle ranks differ: {a} vs {b}")]
    RankMismatch { a: usize, b: usize },
    #[error("couboundary witness is singular on chart {chart} at ({x}, {y})")]
    SingularWitness { chart: usize, x: f64, y: f64 },
    #[error("no transition matrix for overlapping charts ({a}, {b})")]
    MissingTransition { a: usize, b: usize },
    #[error("refinement patch {patch} is not contained in its assigned chart")]
    Containment { patch: usize },
    #[error("charts {i} and {j} have intersecting supports but no transition data")]
    SupportMismatch { i: usize, j: usize },
    #[error("operation requires manifold `{expected}`, atlas is `{got}`")]
    WrongManifold { expected: String, got: String },
}
