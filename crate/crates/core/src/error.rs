use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = 2 is not supported: the tower is only defined for odd primes")]
    EvenPrime,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group exponent k must be at least 1 (got {0})")]
    ZeroExponent(u32),
    #[error("suspension degree {n} is below {min}")]
    DegreeTooSmall { n: i64, min: i64 },
    #[error("index ({a}, {b}) outside 1..={k} x 1..={d}")]
    IndexOutOfRange { a: u32, b: usize, k: u32, d: usize },
    #[error("W(n) needs p not dividing n and W'(n) needs p dividing n (n = {n}, p = {p})")]
    DivisibilityMismatch { n: i64, p: u64 },
    #[error("inadmissible Mackey functor parameters {family}({i}, {j}) for k = {k}")]
    InadmissibleMackey { family: &'static str, i: u32, j: u32, k: u32 },
    #[error("level {level} outside 0..={k}")]
    LevelOutOfRange { level: u32, k: u32 },
    #[error("representations live over different groups")]
    GroupMismatch,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
