//! Error type shared by all qdice operations.

use thiserror::Error;

/// Errors produced by state construction, measurement, and probability queries.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("vectors are linearly dependent (offending index {index})")]
    LinearlyDependent { index: usize },

    #[error("matrix is not unitary (max |U\u{2020}U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not a valid density operator: {reason}")]
    NotDensity { reason: String },

    #[error("matrix is not a projector: {reason}")]
    NotProjector { reason: String },

    #[error("invalid projective measure: {reason}")]
    InvalidMeasure { reason: String },

    #[error("a measure needs at least two outcomes, got {count}")]
    TooFewOutcomes { count: usize },

    #[error("outcome index {index} out of range (measure has {count} outcomes)")]
    OutcomeOutOfRange { index: usize, count: usize },

    #[error("conditioning on null event (probability {probability:.3e})")]
    NullConditioning { probability: f64 },

    #[error("duplicate factor label \"{0}\"")]
    DuplicateLabel(String),

    #[error("unknown factor label \"{0}\"")]
    UnknownLabel(String),

    #[error("invalid partial trace: {0}")]
    InvalidPartialTrace(&'static str),

    #[error("invalid evolution model: {reason}")]
    InvalidEvolution { reason: String },

    #[error("invalid probability distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("weak resolution of unity violated: |Tr \u{03c1} \u{03a3}P(\u{03c0}) - 1| = {residual:.3e} exceeds {tolerance:.3e}")]
    WeakResolutionViolated { residual: f64, tolerance: f64 },

    #[error("invalid prospect: {reason}")]
    InvalidProspect { reason: String },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
