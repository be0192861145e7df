use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is not irreducible over the prime field")]
    ReducibleModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input rejected: {0}")]
    ZeroInput(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("N_* has degree 0 in Y")]
    ConstantInY,
    #[error("N_* is not separable in Y (vanishing discriminant)")]
    NotSeparable,
    #[error("N_* is reducible over F_q(x)")]
    NotIrreducible,
    #[error("wildly ramified place above {center} (ramification {ramification} divisible by p)")]
    WildRamification { center: String, ramification: usize },
    #[error("insufficient series precision: {0}")]
    InsufficientPrecision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(
        "incomplete search: instance is reducible but no solution was found up to coefficient degree {max_degree}"
    )]
    IncompleteSearch { max_degree: usize },
    #[error("trivial divisor rejected")]
    TrivialDivisor,
    #[error("order {order} of the gcrd is divisible by p = {p}")]
    OrderDivisibleByP { order: usize, p: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
