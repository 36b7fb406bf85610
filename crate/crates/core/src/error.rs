use thiserror::Error;

use crate::classes::ClassId;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {0} appears more than once")]
    DuplicateValue(i64),
    #[error("value {value} is outside 1..={len}")]
    OutOfRangeValue { value: i64, len: usize },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("length {n} exceeds the enumeration limit {max}")]
    SizeLimitExceeded { n: usize, max: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(String),
    #[error("permutation is not Fibonacci (it contains 231, 312 or 321)")]
    NotFibonacci,
    #[error("malformed tiling {0:?}: only 'm' and 'd' are allowed")]
    MalformedTiling(String),
    #[error("permutation is not in Av({0})")]
    NotInClass(ClassId),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("tiling {0:?} is not in the image of the bijection")]
    ExcludedTiling(String),
    #[error("operation is not defined for class {0}")]
    UnsupportedClass(ClassId),
    #[error("length {n} is not supported here (need n >= {min})")]
    UnsupportedLength { n: usize, min: usize },
    #[error("expression is not evaluable: {0}")]
    NotEvaluable(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("identity {0} needs a class")]
    MissingClass(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
