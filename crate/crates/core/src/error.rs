use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point is not in the convex hull of the atoms")]
    NotInHull,
    #[error("point is not Pareto optimal in the convex hull of the atoms")]
    NotPareto,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate construction stalled at stage {stage}: no strictly positive supporting normal and no separating nonnegative normal")]
    CertificateStall { stage: usize },
    #[error("no atom has performance vector {0}")]
    NoLiftFound(String),
    #[error("{what} exceeds the size limit of {limit}")]
    SizeLimit { what: String, limit: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
