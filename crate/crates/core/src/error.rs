use thiserror::Error;

use crate::norm::BoundReport;
use crate::tensor::SignTensor;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("dimension mismatch at coordinate {coordinate}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        coordinate: usize,
        expected: usize,
        actual: usize,
    },

    #[error("coordinate index {index} out of range for order {order}")]
    CoordinateOutOfRange { index: usize, order: usize },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite entry at flat index {0}")]
    NonFinite(usize),

    #[error("exhaustive enumeration needs 2^{required_log2} vertices, budget is {budget}")]
    BudgetExceeded { required_log2: u32, budget: u64 },

    #[error("power iteration did not converge after {iterations} iterations (best estimate {best})")]
    NoConvergence { iterations: usize, best: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("no certified upper bound can fall below the threshold {threshold} (best a priori upper {best_upper})")]
    Uncertifiable { threshold: f64, best_upper: f64 },

    #[error("no draw certified below {threshold} after {draws} draws (best upper {})", best.1.upper)]
    NotCertified {
        draws: u64,
        threshold: f64,
        best: Box<(SignTensor, BoundReport)>,
    },

    #[error("norm configuration cannot certify an exact value: {0}")]
    NotExact(String),

    #[error("decode error: {0}")]
    Decode(String),
}
