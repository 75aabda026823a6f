use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("precision must be at least 1 (got {0})")]
    InvalidPrecision(u32),

    #[error("the valuation of 0 is not finite")]
    UndefinedValuation,

    #[error("operands carry different primes ({0} and {1})")]
    MixedPrimes(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("all known digits were cancelled; the value is zero to the available precision")]
    PrecisionExhausted,

    #[error("requested {requested} digits but only {available} are known")]
    InsufficientPrecision { requested: i64, available: i64 },

    #[error("result has negative valuation {0} where a p-adic integer was expected")]
    NonIntegral(i64),

    #[error("{0}")]
    Domain(String),

    #[error("degenerate pair: a = b = {0}")]
    DegeneratePair(u64),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("oracle argument {value} exceeds the guard {guard}; pass --force to override")]
    OracleTooLarge { value: String, guard: u64 },

    #[error("modulus {0}^{1} is too large for residue tables")]
    ModulusTooLarge(u64, u32),

    #[error("cache I/O: {0}")]
    Cache(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
