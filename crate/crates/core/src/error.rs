use thiserror::Error;

/// Errors raised by the jet, Möbius, Schwarzian, bidifferential, torsor and
/// surface operations.
///
/// The variant names double as the stable `kind` strings of the CLI error
/// envelope, see [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basepoint mismatch: {0}")]
    BasepointMismatch(String),
    #[error("division by a jet whose constant term {0:e} is below the floor")]
    DivisionByNonUnit(f64),
    #[error("jet order {got} is too low, need at least {need}")]
    OrderTooLow { got: usize, need: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("degenerate Möbius coefficients: determinant {0:e}")]
    DegenerateMap(f64),
    #[error("basepoint is the pole of the Möbius map")]
    PoleAtBasepoint,
    #[error("derivative vanishes at the basepoint (|f'| = {0:e})")]
    CriticalPoint(f64),
    #[error("Schwarzians differ by {0:e}")]
    NotCoschwarzian(f64),
    #[error("Möbius fit residual {0:e} exceeds bound")]
    FitFailed(f64),
    #[error("germ fails the canonical 2-diagonal check (defect {0:e})")]
    NotCanonical(f64),
    #[error("independent computations disagree: {first} vs {second}")]
    InconsistentRoutes { first: String, second: String },
    #[error("point lies on the period lattice")]
    LatticePoint,
    #[error("points coincide on the diagonal")]
    DiagonalPoint,
    #[error("cross ratio has a pole at these points")]
    PolePoint,
    #[error("invalid torus modulus: {0}")]
    InvalidModulus(String),
}

impl Error {
    /// Stable machine-readable name of the error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BasepointMismatch(_) => "BasepointMismatch",
            Error::DivisionByNonUnit(_) => "DivisionByNonUnit",
            Error::OrderTooLow { .. } => "OrderTooLow",
            Error::NotInvertible(_) => "NotInvertible",
            Error::DegenerateMap(_) => "DegenerateMap",
            Error::PoleAtBasepoint => "PoleAtBasepoint",
            Error::CriticalPoint(_) => "CriticalPoint",
            Error::NotCoschwarzian(_) => "NotCoschwarzian",
            Error::FitFailed(_) => "FitFailed",
            Error::NotCanonical(_) => "NotCanonical",
            Error::InconsistentRoutes { .. } => "InconsistentRoutes",
            Error::LatticePoint => "LatticePoint",
            Error::DiagonalPoint => "DiagonalPoint",
            Error::PolePoint => "PolePoint",
            Error::InvalidModulus(_) => "InvalidModulus",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
