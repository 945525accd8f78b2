use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension must be at least 1, got {0}")]
    AmbientDimension(i64),

    #[error("degree must be non-negative, got {0}")]
    NegativeDegree(i64),

    #[error("multiplicities must be non-negative, got {0}")]
    NegativeMultiplicity(i64),

    #[error("point index {index} out of range for {points} points")]
    IndexOutOfRange { index: usize, points: usize },

    #[error("multi-index entries must be strictly increasing")]
    UnsortedIndex,

    #[error("classes live on different lattices: (n={0}, s={1}) vs (n={2}, s={3})")]
    LatticeMismatch(u32, usize, u32, usize),

    #[error("a Cremona transformation needs {expected} base points, got {got}")]
    CremonaSubset { expected: usize, got: usize },

    #[error("blow-up level {level} out of range 0..{levels}")]
    LevelOutOfRange { level: i64, levels: usize },

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("linear system is empty (Euler characteristic {euler})")]
    EmptySystem { euler: BigInt },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("prime field too small: need p > {degree}, got {bits}-bit primes")]
    PrimeTooSmall { degree: u32, bits: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
