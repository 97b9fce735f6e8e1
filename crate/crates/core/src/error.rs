use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no terms")]
    ZeroSeries,
    #[error("series is not a unit of valuation zero: {0}")]
    NonUnit(String),
    #[error("curves are parallel: {0}")]
    NonTransverse(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("marker collides with an intersection point: {0}")]
    MarkerCollision(String),
    #[error("composition mismatch: {0}")]
    Mismatch(String),
    #[error("rank and degree are not coprime: {0}")]
    BadGcd(String),
    #[error("invalid tower base: {0}")]
    BadBase(String),
    #[error("surgery is not elementary: {0}")]
    NonElementary(String),
    #[error("surgery result has zero class")]
    NullClass,
    #[error("slope outside the anchored family: {0}")]
    UnanchoredSlope(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroSeries => "ZeroSeries",
            Error::NonUnit(_) => "NonUnit",
            Error::NonTransverse(_) => "NonTransverse",
            Error::DegenerateConfiguration(_) => "DegenerateConfiguration",
            Error::MarkerCollision(_) => "MarkerCollision",
            Error::Mismatch(_) => "Mismatch",
            Error::BadGcd(_) => "BadGcd",
            Error::BadBase(_) => "BadBase",
            Error::NonElementary(_) => "NonElementary",
            Error::NullClass => "NullClass",
            Error::UnanchoredSlope(_) => "UnanchoredSlope",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
