use thiserror::Error;

/// Errors raised by the planners and their helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid limits: {0}")]
    InvalidLimits(String),

    #[error("negative duration {0}")]
    NegativeDuration(f64),

    #[error("time {t} outside profile span [{start}, {end}]")]
    OutOfSpan { t: f64, start: f64, end: f64 },

    #[error("profiles do not join continuously at t = {0}")]
    Discontinuity(f64),

    #[error("boundary state outside limits: {0}")]
    InfeasibleBoundary(String),

    #[error("no profile found for the requested motion: {0}")]
    NoSolution(String),

    #[error("imposed duration {t_imp} has no slowing-velocity solution")]
    InfeasibleDuration { t_imp: f64 },

    #[error("imposed duration {t_imp} is shorter than the minimal time {t_opt}")]
    DurationTooShort { t_imp: f64, t_opt: f64 },

    #[error("degenerate polynomial (all coefficients zero)")]
    DegeneratePolynomial,

    #[error("quaternion norm {0} is not unit")]
    NonUnitQuaternion(f64),

    #[error("at least three points are required, got {0}")]
    TooFewPoints(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("oracle search budget of {0} nodes exceeded")]
    BudgetExceeded(usize),

    #[error("oracle search exhausted without reaching the goal")]
    Unreachable,
}

pub type Result<T> = std::result::Result<T, PlanError>;
