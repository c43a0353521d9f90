use thiserror::Error;

/// Errors raised by the kernel.
///
/// Each variant has a stable name (see [`Error::name`]) which is what the
/// JSON surface reports as `{"error": "<name>"}`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("scalar is not a unit in its ring")]
    NotAUnit,
    #[error("scalar is not a dual number")]
    NotDual,
    #[error("operands live in different rings: {0}")]
    RingMismatch(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("linear operator is singular")]
    SingularOperator,
    #[error("element does not lie in the ambient subspace")]
    NotInSubspace,
    #[error("operation not available for this Jordan flavor: {0}")]
    UnsupportedFlavor(&'static str),
    #[error("pair is not quasi-invertible")]
    NotQuasiInvertible,
    #[error("point is not in the affine chart")]
    NotInChart,
    #[error("points are not transversal")]
    NotTransversal,
    #[error("point is not in the symmetric space")]
    NotInSpace,
    #[error("truncated cosh operator is singular")]
    SeriesNotInvertible,
    #[error("argument outside the domain of the map")]
    DomainViolation,
    #[error("context not supported: {0}")]
    UnsupportedContext(&'static str),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable identifier used in JSON error objects.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotAUnit => "NotAUnit",
            Error::NotDual => "NotDual",
            Error::RingMismatch(_) => "RingMismatch",
            Error::NotInvertible => "NotInvertible",
            Error::SingularOperator => "SingularOperator",
            Error::NotInSubspace => "NotInSubspace",
            Error::UnsupportedFlavor(_) => "UnsupportedFlavor",
            Error::NotQuasiInvertible => "NotQuasiInvertible",
            Error::NotInChart => "NotInChart",
            Error::NotTransversal => "NotTransversal",
            Error::NotInSpace => "NotInSpace",
            Error::SeriesNotInvertible => "SeriesNotInvertible",
            Error::DomainViolation => "DomainViolation",
            Error::UnsupportedContext(_) => "UnsupportedContext",
            Error::Shape(_) => "Shape",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
