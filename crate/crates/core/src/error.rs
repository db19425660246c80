use thiserror::Error;

use crate::params::{LambdaClass, TruncationKind};

/// Errors raised by the evaluation, approximation and analysis routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("lambda must be nonzero")]
    ZeroLambda,

    #[error("pole index {k} is excluded: 0 is a removable singularity when lambda = 1")]
    ExcludedPole { k: i64 },

    #[error("truncation kind {kind:?} is not admissible for lambda class {class:?}")]
    InadmissibleKind { kind: TruncationKind, class: LambdaClass },

    #[error("truncation set Z_0 is empty when lambda = 1")]
    EmptySet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision must be at least 53 bits, got {0}")]
    InvalidPrecision(u32),

    #[error("quadrature did not reach tolerance within {panels} panels")]
    QuadratureNonConvergence { panels: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("operation undefined for lambda = 1")]
    UnitLambda,

    #[error("operation undefined for lambda = -1")]
    MinusOneLambda,

    #[error("lambda class {class:?} not supported here: {reason}")]
    WrongClass { class: LambdaClass, reason: &'static str },

    #[error("{a}/{d} is not in lowest terms")]
    NotReduced { a: i64, d: i64 },

    #[error("pair angle {alpha} is not rational within the requested bounds")]
    NotRationalAngle { alpha: f64 },

    #[error("distance {actual} to the exceptional set is below the requested {requested}")]
    TooCloseToExceptional { actual: f64, requested: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
