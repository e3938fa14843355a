use thiserror::Error;

use crate::reflexivity::ReflexivityReport;

#[derive(Debug, Error)]
pub enum OpError {
    #[error("operator is not Hermitian: ‖A − A*‖ = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("derivative order {order} outside the supported range {min}..={max}")]
    InvalidOrder {
        order: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("could not generate an invariant-subspace family with Alg(family) = M after {attempts} extra combinations (dim Alg = {found}, dim M = {expected})")]
    LatGenerationFailed {
        attempts: usize,
        expected: usize,
        found: usize,
    },

    #[error("reflexivity violated: dim expected {}, computed {}, max residual {:e}", .0.dim_expected, .0.dim_computed, .0.max_residual)]
    ReflexivityViolation(Box<ReflexivityReport>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = OpError> = std::result::Result<T, E>;
