use crate::rational::Q;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid twisted rank {0}: need l >= 2")]
    InvalidRank(usize),
    #[error("invalid weight: level k0 + kj must be positive")]
    InvalidWeight,
    #[error("series shape mismatch: {left} vs {right} color variables")]
    ShapeMismatch { left: usize, right: usize },
    #[error("truncation mismatch: qmax {left} vs {right}")]
    TruncationMismatch { left: Q, right: Q },
    #[error("q-exponent {qexp} is not a multiple of 1/{denominator}")]
    DenominatorViolation { qexp: Q, denominator: i64 },
    #[error("cannot compare to order {requested}: series truncated at {available}")]
    InsufficientPrecision { requested: Q, available: Q },
    #[error("infinite product with base exponent {0} and step {1} does not converge")]
    NonConvergentProduct(Q, Q),
    #[error("partition is not nonincreasing: {0:?}")]
    NonMonotonePartition(Vec<u32>),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("charge {charge} exceeds k-1 = {max} for the parafermionic space")]
    ChargeTooLarge { charge: u32, max: u32 },
    #[error("negative parafermionic quadratic exponent {0} (formula tripwire)")]
    NegativeQuadraticExponent(Q),
    #[error("unknown example character `{0}`")]
    UnknownExample(String),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("{0}")]
    Precondition(String),
}
