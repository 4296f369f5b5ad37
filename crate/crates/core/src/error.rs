use thiserror::Error;

/// Errors raised by the arithmetic and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the embedding epsilon is only defined on K, element is not in K")]
    NotInK,
    #[error("valuation requested at an infinite place")]
    InfinitePlace,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} splits in K; name one of the two places above it")]
    SplitPrime(u64),
    #[error("the prime 2 is excluded here")]
    PrimeTwoExcluded,
    #[error("insufficient 2-adic precision (have {have} bits)")]
    Precision { have: u32 },
    #[error("precision ceiling of {0} bits exceeded")]
    PrecisionCeiling(u32),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("entry is not integral at 7")]
    NotIntegralAtSeven,
    #[error("reduction does not preserve the null space of H mod sqrt(-7)")]
    NullSpaceNotPreserved,
    #[error("matrix is not a similitude of H")]
    NotSimilitude,
    #[error("matrix is not {0}")]
    Symmetry(&'static str),
    #[error("eigenvalue {0:e} is within tolerance of zero")]
    NearZeroEigenvalue(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
