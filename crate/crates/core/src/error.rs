//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by algebra construction and the verification operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    #[error("unsupported Cartan type: {0}")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("evaluation too close to a coth pole at root {root} (|sinh| = {sinh_abs:.3e})")]
    NearPole { root: String, sinh_abs: f64 },

    #[error("Cayley transform pole: |c - 1| = {dist:.3e} at root {root}")]
    CayleyPole { root: String, dist: f64 },

    #[error("subspace is not transverse: {0}")]
    NotTransverse(String),

    #[error("sampled r-matrix is not of dynamical form: {0}")]
    NotDynamical(String),

    #[error("subspace does not classify to an (S, lambda0) pair: {0}")]
    NotClassifiable(String),

    #[error("section does not provide the required 1-jet data: {0}")]
    JetMissing(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
