use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: only 2x2 and 3x3 matrices are handled")]
    InvalidDimension(usize),
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("numerical rank {found} does not match the required rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("leading coefficient vanishes")]
    DegenerateLeadingCoefficient,
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("invalid block parameter: {0}")]
    InvalidBlockParameter(String),
    #[error("parameter {0} is excluded (within tolerance of ±1)")]
    ExcludedParameter(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("unclassifiable structure: {0}")]
    UnclassifiableStructure(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("no witness for edge {0} -> {1}")]
    UnknownEdge(String, String),
    #[error("perturbation size {0} is outside (0, 0.1]")]
    InvalidEpsilon(f64),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
