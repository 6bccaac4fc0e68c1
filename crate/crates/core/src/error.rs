use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root-of-unity order must be positive")]
    ZeroOrder,
    #[error("exponent {exponent} out of range for order {order}")]
    ExponentOutOfRange { exponent: u32, order: u32 },
    #[error("sequence period must be at least 1")]
    EmptySequence,
    #[error("matrix grid has {got} entries, expected {rows}x{cols}")]
    GridShape { rows: usize, cols: usize, got: usize },
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("family has no members")]
    EmptyFamily,
    #[error("family members disagree on shape: {0}")]
    InconsistentMembers(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid bound arguments: {0}")]
    InvalidBound(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {q} exceeds cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid field element {element} for q = {q}")]
    InvalidElement { element: u32, q: u32 },
    #[error("multiplicative character undefined at zero")]
    ZeroElement,
    #[error("invalid length {0}: must be an odd integer greater than 1")]
    InvalidLength(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid flock size {flock} for period {period}: {reason}")]
    InvalidFlock {
        flock: usize,
        period: usize,
        reason: &'static str,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
