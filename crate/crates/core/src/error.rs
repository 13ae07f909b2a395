use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::MAX_DIM)]
    Dimension(usize),
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("negative value {value} at index {index}")]
    Negative { index: usize, value: f64 },
    #[error("function must be strictly positive, found zero at index {0}")]
    NotPositive(usize),
    #[error("function is identically zero")]
    Zero,
    #[error("function is constant")]
    Constant,
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("empty set")]
    EmptySet,
    #[error("size guard exceeded: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("matrix is rank deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("vector is not in the row space")]
    NotInRowSpace,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
