use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("truncation {n} outside the supported range {min}..={max}")]
    TruncationOutOfRange { n: usize, min: usize, max: usize },
    #[error("t = {t} exceeds the validity bound {bound}")]
    DomainExceeded { t: f64, bound: f64 },
    #[error("supremum attained on the search boundary at log t = {log_t} (index {index})")]
    ArgmaxOnBoundary { index: usize, log_t: f64 },
    #[error("sequence is not log-convex at index {index}")]
    NotLogConvex { index: usize },
    #[error("truncation insufficient: need index {needed}, have {available}")]
    TruncationInsufficient { needed: usize, available: usize },
    #[error("argument modulus {modulus} exceeds the reliability radius {radius} (term {index})")]
    ReliabilityExceeded { index: usize, modulus: f64, radius: f64 },
    #[error("point {re}+{im}i lies outside the sector")]
    OutsideSector { re: f64, im: f64 },
    #[error("no admissible integration ray for arg z = {arg}")]
    AdmissibilityFailed { arg: f64 },
    #[error("growth gate failed for row {row}")]
    GrowthGateFailed { row: usize },
    #[error("matrix rows are not monotone at row {row}, index {index}")]
    MonotonicityViolation { row: usize, index: usize },
    #[error("no finite h on the search grid")]
    NoFiniteH,
    #[error("weight function precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
