use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrameError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not unit norm (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("frame vectors are not unit norm (max deviation {deviation:.3e})")]
    NotUnitNormFrame { deviation: f64 },

    #[error("family does not span the space (lower frame bound {lower_bound:.3e})")]
    NotAFrame { lower_bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible recipe: {0}")]
    Infeasible(String),

    #[error("no catalogued equiangular tight frame for M={m}, N={n}")]
    Unsupported { m: usize, n: usize },

    #[error("combinatorial cap exceeded: N={n} > cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("input is not sorted non-increasing and non-negative at position {index}")]
    NotSorted { index: usize },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}
