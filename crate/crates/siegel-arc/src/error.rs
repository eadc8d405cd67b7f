use thiserror::Error;

/// Every failure mode of the geometric kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate spectrum: eigenvalues {0} and {1} coincide within tolerance")]
    DegenerateSpectrum(f64, f64),
    #[error("matrix is not positive definite (smallest eigenvalue {0})")]
    NotPositiveDefinite(f64),
    #[error("Lagrangians are not transverse")]
    NotTransverse,
    #[error("chart singularity: CZ+D is not invertible")]
    ChartSingularity,
    #[error("tuple is not maximal")]
    NotMaximal,
    #[error("tube endpoints do not interleave")]
    NotInterleaved,
    #[error("tubes do not intersect")]
    EmptyIntersection,
    #[error("point is outside the interval of the tube")]
    OutsideInterval,
    #[error("invalid Lagrangian basis: {0}")]
    InvalidLagrangian(String),
    #[error("matrix is neither symplectic nor antisymplectic (residual {0:e})")]
    NotSymplectic(f64),
    #[error("map is not an involution (residual {0:e})")]
    NotInvolution(f64),
    #[error("map is not antisymplectic")]
    NotAntisymplectic,
    #[error("reflection is not in the reflection set")]
    ReflectionNotInSet,
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("no transverse fixed Lagrangian pair")]
    NoFixedPair,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl GeomError {
    /// Stable machine-readable name, used by the CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::DegenerateSpectrum(..) => "DegenerateSpectrum",
            GeomError::NotPositiveDefinite(_) => "NotPositiveDefinite",
            GeomError::NotTransverse => "NotTransverse",
            GeomError::ChartSingularity => "ChartSingularity",
            GeomError::NotMaximal => "NotMaximal",
            GeomError::NotInterleaved => "NotInterleaved",
            GeomError::EmptyIntersection => "EmptyIntersection",
            GeomError::OutsideInterval => "OutsideInterval",
            GeomError::InvalidLagrangian(_) => "InvalidLagrangian",
            GeomError::NotSymplectic(_) => "NotSymplectic",
            GeomError::NotInvolution(_) => "NotInvolution",
            GeomError::NotAntisymplectic => "NotAntisymplectic",
            GeomError::ReflectionNotInSet => "ReflectionNotInSet",
            GeomError::ConstraintViolation(_) => "ConstraintViolation",
            GeomError::NoFixedPair => "NoFixedPair",
            GeomError::InvalidRepresentation(_) => "InvalidRepresentation",
            GeomError::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
