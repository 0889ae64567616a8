use thiserror::Error;

use crate::complex::FaceId;

/// Errors produced by the library. Verification outcomes that are part of a
/// normal answer (a configuration that is not simple, a failing check) are
/// reported through return values, not through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a non-empty polyhedron")]
    EmptyPolyhedron,

    #[error("inequality index {0} is out of range")]
    BadInequalityIndex(usize),

    #[error("cells {first} and {second} overlap in a set that is not a face of both")]
    OverlapNotFace { first: usize, second: usize },

    #[error("unknown face {0}")]
    UnknownFace(FaceId),

    #[error("complex is not pure")]
    NotPure,

    #[error("face set is not a subcomplex: {0} has a face outside the set")]
    NotSubcomplex(FaceId),

    #[error("site set is empty")]
    EmptySiteSet,

    #[error("sites {0} and {1} coincide")]
    DuplicateSite(usize, usize),

    #[error("site configuration is not simple (witness {witness:?}); perturb it first")]
    NonSimpleConfiguration { witness: Vec<usize> },

    #[error("perturbation bound must be positive")]
    InvalidBound,

    #[error("no simple perturbation found within {cap} attempts")]
    RetryCapExceeded { cap: usize },

    #[error("region must contain at least one non-empty bounded piece")]
    InvalidRegion,

    #[error("face {0} is not a simple polyhedron")]
    NonSimpleFace(FaceId),

    #[error("complex is not simple (witness face {0:?})")]
    NonSimpleComplex(Option<FaceId>),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("simplicial complex is disconnected")]
    Disconnected,

    #[error("simplex {0:?} is not in the complex")]
    MissingSimplex(Vec<usize>),

    #[error("vertex {vertex} out of range for a complex on {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("strata are not downward closed: {0:?} has a subset with no component")]
    StrataNotDownwardClosed(Vec<String>),

    #[error("unknown component label {0}")]
    UnknownLabel(String),

    #[error("degree must be at least 1")]
    InvalidDegree,

    #[error("generator index {index} out of range (presentation has {count})")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
