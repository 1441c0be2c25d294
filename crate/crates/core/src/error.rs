use thiserror::Error;

use crate::rational::ParseRationalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid complex: {0}")]
    Complex(#[from] crate::complex::ComplexViolation),

    #[error("invalid base surface: {0}")]
    Surface(String),

    #[error("filtration is not monotone: simplex {simplex} is below its face {face} at base vertex {vertex}")]
    NotMonotone {
        simplex: usize,
        face: usize,
        vertex: usize,
    },

    #[error("values are not monotone: simplex {simplex} is below its face {face}")]
    NonMonotoneValues { simplex: usize, face: usize },

    #[error("simplex indexing is not a bijection onto 0..{0}")]
    BadIndexing(usize),

    #[error("matrix is not strictly upper triangular at ({row}, {col})")]
    NotUpperTriangular { row: usize, col: usize },

    #[error("matrix is not reduced: columns {0} and {1} share a low")]
    NotReduced(usize, usize),

    #[error("position {0} out of range")]
    OutOfRange(usize),

    #[error("simplices {0} and {1} are incident and cannot be transposed")]
    IncidentTransposition(usize, usize),

    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),

    #[error("point {0} lies outside the base space")]
    OutsideBase(String),

    #[error("point {point} lies outside triangle {tri}")]
    OutsideTriangle { point: String, tri: usize },

    #[error("transposition list is not closed: no consecutive pair among {0} remaining")]
    NotClosed(usize),

    #[error("arrangement: {0}")]
    Arrangement(String),

    #[error("detection: {0}")]
    Detection(String),

    #[error("{0}")]
    Number(#[from] ParseRationalError),

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("archive: {0}")]
    Archive(String),

    #[error("mismatched point cloud sizes: {0} vs {1}")]
    CloudSize(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid input data rather than by the
    /// environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
