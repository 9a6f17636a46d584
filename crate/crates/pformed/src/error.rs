//! Error types shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("axis {axis} out of range for dimension {dim} (axes are 1-based)")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("grade mismatch: expected {expected}, got {got}")]
    GradeMismatch { expected: usize, got: usize },

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("interior product of a 0-form is undefined")]
    ContractScalar,

    #[error("step must be positive, got {0}")]
    NonpositiveStep(f64),

    #[error("degenerate box: min >= max on axis {axis}")]
    DegenerateBox { axis: usize },

    #[error("boxes {first} and {second} have overlapping interiors")]
    OverlappingBoxes { first: usize, second: usize },

    #[error("region must contain at least one box")]
    EmptyRegion,

    #[error("quadrature order must be >= 1, got {0}")]
    InvalidQuadratureOrder(usize),

    #[error("Jacobian determinant not positive ({value:.3e}) at {point:?}")]
    NonpositiveJacobian { point: Vec<f64>, value: f64 },

    #[error("Jacobian matrix ill-conditioned (cond ~ {condition:.3e}) at {point:?}")]
    IllConditionedJacobian { point: Vec<f64>, condition: f64 },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scenario is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}
