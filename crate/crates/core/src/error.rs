use thiserror::Error;

use crate::qnum::HalfInt;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid deformation parameter q = {0}")]
    InvalidQ(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("negative radicand {0}")]
    NegativeRadicand(f64),

    #[error("parity violation: l = {l}, i = {i}, j = {j}")]
    Parity { l: HalfInt, i: HalfInt, j: HalfInt },

    #[error("index not in truncated space: {0}")]
    NotInSpace(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("ill-conditioned rank decision: singular value {sigma:e} within guard band of threshold {threshold:e}")]
    IllConditionedRank { sigma: f64, threshold: f64 },

    #[error("Q-matrix is not scalar: {0}")]
    NotScalar(String),

    #[error("Q-matrix is singular")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("report error: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
