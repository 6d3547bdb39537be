use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected block size {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {re} + {im}i is not inside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eig:e}")]
    NotPsd { min_eig: f64 },

    #[error("trace identity routes disagree: poisson {poisson:e}, gram {gram:e} (relative {relative:e})")]
    TraceMismatch { poisson: f64, gram: f64, relative: f64 },

    #[error("route inconsistency: {0}")]
    Inconsistent(String),

    #[error("rank-one sum {k} does not vanish: norm {norm:e}")]
    PremiseViolated { k: usize, norm: f64 },

    #[error("hankel product sum is not zero (max entry {max_abs:e})")]
    NotZeroInstance { max_abs: f64 },

    #[error("block size {n} needs a permutation sampling budget (exhaustive limit is 8)")]
    TooManyPermutations { n: usize },

    #[error("malformed symbol: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
