use thiserror::Error;

/// Errors raised by the map and state routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("basis error: {0}")]
    Basis(String),

    #[error("specification violated: {0}")]
    Spec(String),

    #[error("map is not completely positive (min Choi eigenvalue {min_eig:.3e})")]
    NotCp { min_eig: f64 },

    #[error(
        "state already lies in the ball (purity {purity:.6} <= {bound:.6}); no witness exists"
    )]
    InBall { purity: f64, bound: f64 },

    #[error("transfer matrix is not diagonalizable (eigenvector condition number {cond:.3e})")]
    NonDiagonalizable { cond: f64 },

    #[error("map is not a projection (||pi^2 - pi|| = {residual:.3e})")]
    NotAProjection { residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "DimensionError",
            Error::Basis(_) => "BasisError",
            Error::Spec(_) => "SpecError",
            Error::NotCp { .. } => "NotCP",
            Error::InBall { .. } => "InBall",
            Error::NonDiagonalizable { .. } => "NonDiagonalizable",
            Error::NotAProjection { .. } => "NotAProjection",
            Error::Numerical(_) => "NumericalError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
