use thiserror::Error;

/// Errors produced anywhere in the decomposition pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero matrix has no Smith normal form")]
    ZeroMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not unimodular (|det| = {det})")]
    NotUnimodular { det: String },
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("lattice point {point:?} is not in the image of the map")]
    NotInLattice { point: Vec<i64> },
    #[error("subset {subset:?} has rank {rank}, expected {expected}")]
    RankCondition {
        subset: Vec<usize>,
        rank: usize,
        expected: usize,
    },
    #[error("mixed volume is zero (witness subset {witness:?})")]
    ZeroMixedVolume { witness: Vec<usize> },
    #[error("degenerate fiber: polynomial {index} restricts to zero")]
    DegenerateFiber { index: usize },
    #[error("singular Jacobian (condition estimate {condition:e})")]
    SingularJacobian { condition: f64 },
    #[error("Newton iteration did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("found {found} solutions, expected {expected}")]
    CountMismatch {
        found: usize,
        expected: usize,
        partial: Vec<crate::torus::TorusPoint>,
    },
    #[error("exponent overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
