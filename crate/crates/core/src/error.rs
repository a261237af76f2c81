use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("g{i}{j} and g{j}{i} are both given with different expressions")]
    AsymmetricEntry { i: usize, j: usize },
    #[error("missing diagonal entry g{0}{0}")]
    MissingDiagonal(usize),
    #[error("duplicate binding `{0}`")]
    DuplicateBinding(String),
    #[error("domain violation in `{node}`: {reason}")]
    Domain { node: String, reason: String },
    #[error("metric is singular or not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("curvature symmetry violated by {defect:e}")]
    SymmetryViolation { defect: f64 },
    #[error("matrix is not in SO(4) (defect {defect:e})")]
    NotSpecialOrthogonal { defect: f64 },
    #[error("fiber chart violation: {0}")]
    FiberChart(String),
    #[error("stencil point {point:?} leaves the chart domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    /// Errors caused by bad input rather than by a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::SymmetryViolation { .. }
                | Error::NotSpecialOrthogonal { .. }
                | Error::FiberChart(_)
                | Error::NotApplicable(_)
        )
    }
}
