use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("modulus too large for exact CRT")]
    ModulusOverflow,

    #[error("dimension must be at least {min}, got {got}")]
    Dimension { min: usize, got: usize },

    #[error("dimension {0} is not supported (maximum {1})")]
    DimensionTooLarge(usize, usize),

    #[error("point has {got} coordinates, expected {expected}")]
    CoordinateCount { expected: usize, got: usize },

    #[error("coordinate {value} is out of range for modulus {n}")]
    CoordinateRange { value: u64, n: u64 },

    #[error("points live on different boards (n={0}, d={1} vs n={2}, d={3})")]
    BoardMismatch(u64, usize, u64, usize),

    #[error("duplicate queen at {0:?}")]
    DuplicateQueen(Vec<u64>),

    #[error("board Z_{n}^{d} is too large to index ({n}^{d} cells)")]
    BoardTooLarge { n: u64, d: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
