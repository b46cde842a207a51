use thiserror::Error;

/// Errors raised by the library. Search exhaustion and budget overruns are
/// not errors; they are reported through [`crate::search::SearchOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed group spec {text:?}: {reason}")]
    MalformedSpec { text: String, reason: String },

    #[error("group factor must be a positive integer, got {0}")]
    NonPositiveFactor(String),

    #[error("{what} exceeds the size limit of {limit}")]
    SizeLimit { what: String, limit: u64 },

    #[error("element {element} does not belong to group {group}")]
    NotInGroup { element: String, group: String },

    #[error("mismatched ambient groups: {left} vs {right}")]
    MismatchedAmbient { left: String, right: String },

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("{what} budget exceeded: {needed} > {limit}")]
    BudgetExceeded {
        what: String,
        needed: u64,
        limit: u64,
    },

    #[error("cardinality precondition failed: {0}")]
    Cardinality(String),

    #[error("set must be nonempty")]
    EmptySet,

    #[error("point {point} lies outside the box {dims}")]
    OutsideBox { point: String, dims: String },

    #[error("coordinate {value} in axis {axis} is not below modulus {modulus}")]
    CoordinateOutOfRange {
        axis: usize,
        value: u64,
        modulus: u64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid lifting factor {k}: {reason}")]
    LiftFactor { k: u64, reason: String },

    #[error("set is already lifted (k = {0}); expected a base-boxed set")]
    NotBaseBoxed(u64),

    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,

    #[error("line {line}: {reason}")]
    SetFile { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
