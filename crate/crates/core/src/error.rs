use thiserror::Error;

/// Errors raised by the solvers, curvature extraction and bound evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("warping function is not positive at interior grid index {index}")]
    NonPositiveWarping { index: usize },

    #[error("need at least 3 snapshots, found {found}")]
    InsufficientSnapshots { found: usize },

    #[error("|R_N| = {value} exceeds the bound at t = {t}, x = {x}")]
    BoundHypothesisViolated { t: f64, x: f64, value: f64 },

    #[error("sin(sqrt(Phi) l) vanishes for Phi = {phi_param}: higher resonance")]
    SingularDenominator { phi_param: f64 },

    #[error("invalid boundary data: {0}")]
    InvalidBoundary(String),

    #[error("no stationary solution exists (ResonanceUnsolvable)")]
    MissingSolution,

    #[error("initial data disagrees with the boundary data by {gap}")]
    BoundaryMismatch { gap: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("samples do not vanish at the endpoints: {left}, {right}")]
    NonVanishingEndpoints { left: f64, right: f64 },

    #[error("tabulated boundary data cannot certify integrability on [0, inf)")]
    NonIntegrableBoundary,

    #[error("series constant diverges at t = {t} (requires t > 0)")]
    DivergentAtZero { t: f64 },

    #[error("M2 requires Phi < (pi/l)^2, got Phi = {phi_param}, critical {critical}")]
    SupercriticalM2 { phi_param: f64, critical: f64 },

    #[error("Phi = {phi_param} is not the resonance value {critical}")]
    NotResonant { phi_param: f64, critical: f64 },

    #[error("ODE rate must be negative, got {rate}")]
    NonNegativeRate { rate: f64 },

    #[error("trajectory too short: {found} usable snapshots, need {needed}")]
    TooShort { found: usize, needed: usize },

    #[error("finite-time blow-up at t* = {t_star}")]
    BlowUp { t_star: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
