use thiserror::Error;

/// Errors shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pivot fell below the singularity threshold during elimination.
    #[error("matrix is singular or numerically singular")]
    SingularMatrix,

    /// The matrix is not symmetric within the requested tolerance.
    #[error("matrix is not symmetric within tolerance")]
    NotSymmetric,

    /// A lower bound entry exceeds the matching upper bound entry.
    #[error("interval bounds inverted: lower > upper at entry ({row}, {col})")]
    BoundsInverted { row: usize, col: usize },

    /// The perturbation matrix is not rank 1 within tolerance.
    #[error("perturbation matrix is not rank 1: residual {residual:e} exceeds {bound:e}")]
    RankTooHigh { residual: f64, bound: f64 },

    /// The perturbation matrix is identically zero, so the radius is unbounded.
    #[error("perturbation matrix is zero; the radius of non-singularity is unbounded")]
    ZeroMatrix,

    /// The perturbation matrix has a negative entry.
    #[error("perturbation matrix has a negative entry at ({row}, {col})")]
    NegativeDelta { row: usize, col: usize },

    /// The dimension exceeds the brute-force enumeration cap.
    #[error("dimension {dim} exceeds the brute-force limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    /// The best sampled cost is not positive, so no radius can be reported.
    #[error("best sampled cost {cost} is not positive; no radius reported")]
    NonPositiveCost { cost: f64 },

    /// Matrix construction from ragged row data.
    #[error("matrix rows do not form a square matrix")]
    NotSquare,

    /// Matrix construction with a NaN or infinite entry.
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// The Jacobi sweep budget was exhausted before convergence.
    #[error("eigenvalue iteration did not converge")]
    ConvergenceFailure,

    /// A problem description failed validation.
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
