use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("dimension must be at least {min}, got {dim}")]
    DimensionTooSmall { dim: usize, min: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} is out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("left contraction needs a vector, got grades {grades:?}")]
    NotGradeOne { grades: Vec<usize> },
    #[error("component extraction in odd dimension needs the faithful representation")]
    AmbiguousOddIrreducible,
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("this construction requires even dimension, got {dim}")]
    OddDimension { dim: usize },
    #[error("eigenvalue {eigenvalue} has odd multiplicity {multiplicity}")]
    OddMultiplicity {
        eigenvalue: f64,
        multiplicity: usize,
    },
    #[error("skew parts do not anticommute (residual {residual:e})")]
    NotAnticommuting { residual: f64 },
    #[error("illegal parity pattern: {0}")]
    IllegalParityPattern(String),
    #[error("coefficient constraint violated: {0}")]
    CoefficientConstraintViolated(String),
    #[error("element of h does not commute with B (residual {residual:e})")]
    NotInSoB { residual: f64 },
    #[error("pair does not represent -B (status {status}, residual {residual:e})")]
    PairNotAssociatedToMinusB { status: String, residual: f64 },
    #[error("B is not a multiple of the identity")]
    NonScalarB,
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("not a projector (residual {residual:e})")]
    NotAProjector { residual: f64 },
    #[error("unknown projector name {0:?}")]
    UnknownProjector(String),
    #[error("pair is not invariant under so(B): {0}")]
    NotSoBInvariant(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
