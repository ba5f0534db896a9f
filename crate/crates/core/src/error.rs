use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero has no factorization over a factor base")]
    ZeroCandidate,

    #[error("n = {n} does not exceed the largest lattice prime {largest}")]
    TargetTooSmall { n: BigInt, largest: u64 },

    #[error("lattice basis is rank deficient")]
    RankDeficient,

    #[error("vector is not a point of the prime lattice: {0}")]
    NotALatticeVector(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} supports at most {limit} qubits, got {requested}")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("non-finite objective value during optimization at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("{n} is even")]
    EvenInput { n: BigInt },

    #[error("{n} is prime")]
    PrimeInput { n: BigInt },

    #[error("{n} = {base}^{exponent} is a prime power")]
    PrimePower {
        n: BigInt,
        base: BigInt,
        exponent: u32,
    },

    #[error("relation budget exhausted after {lattices} lattices ({unique} unique relations)")]
    BudgetExhausted { lattices: u64, unique: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
