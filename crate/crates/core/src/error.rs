use thiserror::Error;

use crate::space::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space has no points")]
    EmptySpace,

    #[error("distance matrix is not square: {rows} rows but row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("negative distance {value} at ({i},{j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("non-finite distance at ({i},{j})")]
    NonFinite { i: usize, j: usize },

    #[error("label '{label}' references point index {index}, but the space has {n} points")]
    LabelOutOfRange {
        label: String,
        index: usize,
        n: usize,
    },

    #[error("invalid space: {0}")]
    Invalid(ValidationReport),

    #[error("invalid label set: {0}")]
    InvalidLabels(String),

    #[error("the two spaces are labeled by different label sets")]
    LabelMismatch,

    #[error("{what} refused: size {size} exceeds cap {cap}{advice}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
        advice: &'static str,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("quotient inconsistent: points {a} and {b} were merged but differ by {gap} from point {c}; tolerance too large")]
    MergeInconsistency {
        a: usize,
        b: usize,
        c: usize,
        gap: f64,
    },

    #[error("not a correspondence: {0}")]
    NotCorrespondence(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("malformed travel time data: {0}")]
    MalformedData(String),
}
