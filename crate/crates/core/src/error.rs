use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (supported range is 2..=12)")]
    UnsupportedDimension(usize),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("loop does not close: defect {defect:e} exceeds tolerance {tolerance:e}")]
    ClosureViolation { defect: f64, tolerance: f64 },

    #[error("length {index} is not positive: {value}")]
    NonPositiveLength { index: usize, value: f64 },

    #[error("need at least 3 lengths, got {0}")]
    ArityTooSmall(usize),

    #[error("lengths are not sorted ascending")]
    UnsortedLengths,

    #[error("simplex inequalities fail: margin {margin:e} at index {index}")]
    InfeasibleInput { margin: f64, index: usize },

    #[error("expected {expected} dihedral angles, got {found}")]
    AngleCount { expected: usize, found: usize },

    #[error("dihedral angle {index} = {angle} has vanishing sine")]
    AngleDegenerate { index: usize, angle: f64 },

    #[error("facet loop is not positive (det = {det:e})")]
    NotPositive { det: f64 },

    #[error("inversion round trip error {error:e} exceeds tolerance {tolerance:e}")]
    RoundTripFailure { error: f64, tolerance: f64 },
}
