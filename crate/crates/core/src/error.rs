use thiserror::Error;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field order {0} is not supported (q must be a prime power <= 81)")]
    UnsupportedOrder(u64),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no embedding of GF({base}) into GF({ext})")]
    IncompatibleFields { base: usize, ext: usize },
    #[error("element code {code} is not valid in GF({q})")]
    BadElement { code: u32, q: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point lies inside the subspace")]
    PointInSubspace,
    #[error("expected a set (all multiplicities <= 1)")]
    NotASet,
    #[error("cardinality mismatch: expected {expected}, found {found}")]
    CardinalityMismatch { expected: u64, found: u64 },
    #[error("empty multiset")]
    EmptyMultiset,
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("entry {code} is outside the prime subfield GF({p})")]
    NotInPrimeSubfield { code: u8, p: u32 },
    #[error("codeword is not valid: {0}")]
    BadCodeword(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("singular pivot block")]
    Singular,
    #[error("the linear system is infeasible")]
    Infeasible,
    #[error("the linear program is unbounded")]
    Unbounded,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
