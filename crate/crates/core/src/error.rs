use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Tensor order outside the supported range.
    UnsupportedOrder(usize),
    /// Shapes of the operands do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// An index pair or mode index is out of range.
    IndexOutOfBounds { index: usize, bound: usize },
    /// A tensor contains non-finite entries.
    NonFinite,
    /// A tensor violates permutation symmetry beyond the allowed tolerance.
    NotSymmetric { max_deviation: f64 },
    /// A tensor set has no members.
    EmptySet,
    /// Matrix is not orthogonal within tolerance.
    NotOrthogonal { deviation: f64 },
    /// A parameter failed validation.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedOrder(d) => write!(f, "unsupported tensor order {d} (expected 2, 3 or 4)"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfBounds { index, bound } => {
                write!(f, "index {index} out of bounds (limit {bound})")
            }
            Error::NonFinite => write!(f, "tensor contains non-finite entries"),
            Error::NotSymmetric { max_deviation } => {
                write!(f, "tensor is not symmetric (max deviation {max_deviation:e})")
            }
            Error::EmptySet => write!(f, "tensor set is empty"),
            Error::NotOrthogonal { deviation } => {
                write!(f, "matrix is not orthogonal (|QᵀQ - I| = {deviation:e})")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
