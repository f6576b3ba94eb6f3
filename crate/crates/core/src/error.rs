use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain needs at least 2 points, got {0}")]
    DomainTooSmall(usize),

    #[error("domain size must be even, got {0}")]
    OddDomain(usize),

    #[error("stencil has no taps")]
    EmptyStencil,

    #[error("stencil offset {0} appears more than once")]
    DuplicateOffset(isize),

    #[error("stencil wider than domain: reach {reach} with n = {n}")]
    StencilTooWide { reach: usize, n: usize },

    #[error("domain mismatch: expected {expected} points, got {actual}")]
    DomainMismatch { expected: usize, actual: usize },

    #[error("extension incomplete: no value for ghost index {0}")]
    ExtensionIncomplete(isize),

    #[error("extension maps index {0}, which is not a ghost index of the stencil")]
    UnknownGhost(isize),

    #[error("extension reads index {0}, which is not a boundary point")]
    NonBoundaryReference(usize),

    #[error("extension pair violates boundary-support condition at entry ({row}, {col})")]
    BoundarySupport { row: usize, col: usize },

    #[error("boundary block too large: {size} > {cap}")]
    BoundaryBlockTooLarge { size: usize, cap: usize },

    #[error("dense size {n} exceeds cap {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("CN resolvent singular at this t = {0}")]
    SingularResolvent(f64),

    #[error("bracket failure on interval ({lo}, {hi})")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("root residual {residual:e} above tolerance at xi = {xi}")]
    RootResidual { xi: f64, residual: f64 },

    #[error("degenerate t = {0}")]
    DegenerateStep(f64),

    #[error("logarithm argument not positive for mu = {mu} at t = {t}")]
    LogDomain { t: f64, mu: f64 },

    #[error("oracle gate failed: {0}")]
    OracleGate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularResolvent(_)
                | Error::BracketFailure { .. }
                | Error::RootResidual { .. }
                | Error::DegenerateStep(_)
                | Error::LogDomain { .. }
                | Error::OracleGate(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
