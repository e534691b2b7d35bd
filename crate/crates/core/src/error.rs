use thiserror::Error;

/// Errors raised by the spectral routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid support: center {b}, scale {c} (scale must be positive and finite)")]
    InvalidSupport { b: f64, c: f64 },

    #[error("empty sample list")]
    EmptySamples,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("series live on different supports")]
    SupportMismatch,

    #[error("point {x} lies outside the support [{lower}, {upper}]")]
    OutsideSupport { x: f64, lower: f64, upper: f64 },

    #[error("logarithmic kernel is singular on the diagonal x = y = {0}")]
    DiagonalKernel(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("density takes the negative value {min} on its support")]
    NegativeDensity { min: f64 },

    #[error("measure has mass {mass}, expected a probability")]
    NotProbability { mass: f64 },

    #[error("Newton iteration for the support did not converge after {iterations} steps (residual {residual:e})")]
    NewtonDiverged { iterations: usize, residual: f64 },

    #[error("support ({b}, {c}) is a critical point but not a maximum of the endpoint functional")]
    NotMaximum { b: f64, c: f64 },

    #[error("equilibrium density has mass {mass} instead of 1")]
    MassMismatch { mass: f64 },

    #[error("energy routes disagree by {gap:e}")]
    RouteDisagreement { gap: f64 },

    #[error("symmetric eigensolve failed: {0}")]
    Eigen(String),

    #[error("infimum attained at the grid boundary near x = {x}; widen the grid")]
    GridBoundary { x: f64 },

    #[error("assumption on the potential violated: {0}")]
    Assumption(String),

    #[error("quotient series did not resolve: tail ratio {ratio:e} at degree {degree}")]
    Unresolved { degree: usize, ratio: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
