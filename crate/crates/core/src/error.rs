use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero is not allowed here")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("modulus {0} must be odd and positive")]
    BadModulus(BigInt),
    #[error("D = {0} must be a positive non-square")]
    BadDiscriminant(BigInt),
    #[error("symbol undefined: {0}")]
    Undefined(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("local precision exhausted: {0}")]
    Precision(String),
    #[error("D = {0} is outside the supported families")]
    OutsideFamily(i64),
    #[error("search exhausted: {0}")]
    NotFound(String),
    #[error("value {0} does not fit the supported range")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
