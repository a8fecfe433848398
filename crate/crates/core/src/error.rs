use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular input: z = 0 is excluded from the kernel domain")]
    SingularInput,

    #[error("result overflows f64 (ln|value| = {ln_abs:.3})")]
    Overflow { ln_abs: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("truncation failure: {0}")]
    TruncationFailure(String),

    #[error("quadrature did not reach tolerance: estimated error {error:.3e} after {evaluations} evaluations")]
    QuadratureNotConverged { error: f64, evaluations: usize },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("path passes within {distance:.3e} of the apex on segment {segment} without a crossing marker")]
    UnmarkedCrossing { segment: usize, distance: f64 },

    #[error("path has no crossing marker")]
    MissingCrossing,

    #[error("epsilon {epsilon} too large: adjacent arm has length {arm}")]
    EpsilonTooLarge { epsilon: f64, arm: f64 },

    #[error("path leaves the domain {domain} on segment {segment}")]
    DomainViolation { domain: &'static str, segment: usize },

    #[error("principal value does not settle: last ladder differences {0:?}")]
    PvDivergence(Vec<f64>),

    #[error("path must cross the origin from the left half-plane to the right half-plane")]
    Orientation,

    #[error("segment {segment} has slope angle {angle:.4} outside (-pi/4, pi/4)")]
    SlopeViolation { segment: usize, angle: f64 },

    #[error("point {0} does not lie on the path")]
    NotOnPath(String),

    #[error("test function fails the analyticity spot check (Cauchy-Riemann residual {residual:.3e})")]
    NotAnalytic { residual: f64 },

    #[error("declared f(0) = {declared} disagrees with evaluated f(0) = {evaluated}")]
    ValueAtZeroMismatch { declared: String, evaluated: String },

    #[error("test function `{0}` is not integrable along an infinite path")]
    NotIntegrable(String),

    #[error("invalid regularization schedule: {0}")]
    InvalidSchedule(String),

    #[error("argument function is undefined at the jump q = 0")]
    UndefinedAtJump,

    #[error("invalid tilted line: {0}")]
    InvalidLine(String),

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("extrapolation did not settle: error estimate {0:.3e}")]
    Extrapolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
