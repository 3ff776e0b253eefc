use thiserror::Error;

use crate::upoly::PolyError;

/// Broad failure classes; the command-line front end maps them to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Invalid,
    NonGeneric,
    Budget,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected {expected} points for a circuit in dimension {n}, got {got}")]
    WrongCardinality { n: usize, expected: usize, got: usize },
    #[error("point {index} has {got} coordinates, expected {n}")]
    DimensionMismatch { index: usize, n: usize, got: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("the points do not affinely span the ambient space (DegenerateSpan)")]
    DegenerateSpan,
    #[error("integer data does not fit in 64 bits")]
    Overflow,
    #[error("operation requires a normalized circuit")]
    NotNormalized,
    #[error("expected {expected} equations, got {got}")]
    WrongEquationCount { expected: usize, got: usize },
    #[error("coefficient {which} of g_{index} is zero (ZeroCoefficient)")]
    ZeroCoefficient { index: usize, which: &'static str },
    #[error("g_{0} and g_{1} have the same root (CoincidentRoots)")]
    CoincidentRoots(usize, usize),
    #[error("the coefficient block on w_1..w_n is singular (SingularPivot)")]
    SingularPivot,
    #[error("the eliminant vanishes identically")]
    ZeroEliminant,
    #[error("inexact polynomial division while building H")]
    InexactDivision,
    #[error("shared root between P, Q or f (SharedRoot)")]
    SharedRoot,
    #[error("invalid arguments: {0}")]
    Domain(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::WrongCardinality { .. }
            | Error::DimensionMismatch { .. }
            | Error::DuplicatePoint(..)
            | Error::DegenerateSpan
            | Error::Overflow
            | Error::NotNormalized
            | Error::WrongEquationCount { .. }
            | Error::Domain(_) => ErrorKind::Invalid,
            Error::ZeroCoefficient { .. }
            | Error::CoincidentRoots(..)
            | Error::SingularPivot
            | Error::ZeroEliminant
            | Error::SharedRoot => ErrorKind::NonGeneric,
            Error::BudgetExhausted(_) => ErrorKind::Budget,
            Error::InexactDivision | Error::Internal(_) | Error::Poly(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
