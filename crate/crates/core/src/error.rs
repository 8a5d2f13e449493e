//! Error type shared by all modules.

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("points coincide; no directed geodesic")]
    CoincidentPoints,
    #[error("invalid geodesic: {0}")]
    InvalidGeodesic(String),
    #[error("sequence did not stabilize: spread {spread:e} exceeds {tol:e}")]
    NotStabilized { spread: f64, tol: f64 },
    #[error("bad codimension set {0:?}")]
    BadCodims(Vec<usize>),
    #[error("geodesic is not in the finite pencil")]
    NotInPencil,
    #[error("n = {n} exceeds enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("growth vector is not sorted non-increasing")]
    NotSorted,
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("division by a series with no known nonzero coefficient")]
    DivisionByZeroSeries,
    #[error("truncation window exhausted: {0}")]
    WindowExhausted(String),
    #[error("curve is not positive: {0}")]
    NotPositive(String),
}

impl Error {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::InvalidGeodesic(_) => "InvalidGeodesic",
            Error::NotStabilized { .. } => "NotStabilized",
            Error::BadCodims(_) => "BadCodims",
            Error::NotInPencil => "NotInPencil",
            Error::TooLarge { .. } => "TooLarge",
            Error::InvalidIndex(_) => "InvalidIndex",
            Error::Parse { .. } => "ParseError",
            Error::NotSorted => "NotSorted",
            Error::Incompatible(_) => "Incompatible",
            Error::DivisionByZeroSeries => "DivisionByZeroSeries",
            Error::WindowExhausted(_) => "WindowExhausted",
            Error::NotPositive(_) => "NotPositive",
        }
    }

    /// True for failures caused by malformed input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NotStabilized { .. }
                | Error::WindowExhausted(_)
                | Error::DivisionByZeroSeries
                | Error::NotPositive(_)
                | Error::NotInPencil
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
