//! Exact computations with combinatorial intersection cohomology sheaves on
//! rational fans and the combinatorial Koszul duality functor.

pub mod cli_reports;
pub mod fan_core;
pub mod fixtures;
pub mod graded_linalg;
pub mod homotopy_cat;
pub mod koszul_dual;
pub mod pure_ic;
pub mod ring_side;
pub mod sheaf_quiver;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed fan document: {0}")]
    MalformedDocument(String),
    #[error("cone {0} is not pointed")]
    NonPointedCone(String),
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(String),
    #[error("maximal cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("face {0} is not in the fan")]
    FaceNotInFan(String),
    #[error("degree cutoff {cutoff} too small")]
    CutoffTooSmall { cutoff: i64 },
    #[error("range mismatch: {0}")]
    RangeMismatch(String),
    #[error("sheaf is not pure: {0}")]
    NotPure(String),
    #[error("shift mismatch: {0}")]
    ShiftMismatch(String),
    #[error("complex is not in the heart: {0}")]
    NotInHeart(String),
    #[error("sign audit failed: {0}")]
    SignAuditFailure(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use fan_core::{FaceId, Fan};
