use thiserror::Error;

/// Errors raised by field construction, linear algebra and the verifiers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("characteristic 2 is not supported (p = {0})")]
    EvenCharacteristic(u64),

    #[error("base field GF({p}^{s}) exceeds the supported table size (q <= {max})")]
    FieldTooLarge { p: u64, s: u32, max: u64 },

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("{t} does not divide the extension degree {n}")]
    NotADivisor { t: usize, n: usize },

    #[error("automorphism power {i} out of range for degree {n}")]
    PowerOutOfRange { i: usize, n: usize },

    #[error("element must be nonzero")]
    ZeroElement,

    #[error("norm criterion needs ord(sigma^{i}) > 2, got order {order}")]
    UnsupportedOrder { i: usize, order: usize },

    #[error("degenerate rank is only defined for even order, ord(sigma^{i}) = {order}")]
    OddOrder { i: usize, order: usize },

    #[error("exhaustive enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),

    #[error("subspace has not been verified invertible-closed")]
    Unverified,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
