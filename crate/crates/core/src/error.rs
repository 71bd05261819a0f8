use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("cannot normalize a vector of norm {norm:e}")]
    DegenerateDirection { norm: f64 },

    #[error("invalid conic: {0}")]
    InvalidConic(String),

    #[error("point is off the curve: residual {residual:e} exceeds tolerance {tol:e}")]
    OffCurve { residual: f64, tol: f64 },

    #[error("point lies on the hyperbola's conjugate axis and belongs to no branch")]
    NoBranch,

    #[error("step length must be positive, got {0}")]
    NonPositiveDelta(f64),

    #[error("anchor coincides with a focus; the step direction is undefined")]
    AnchorAtFocus,

    #[error("the apex of the step triangle coincides with a focus")]
    ApexAtFocus,

    #[error("degenerate construction: endpoints coincide (|B - A| = {separation:e}), the apex reflector is undefined")]
    DegenerateTriangle { separation: f64 },

    #[error("{operation} is not defined for a {kind}")]
    UnsupportedVariant {
        operation: &'static str,
        kind: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("no sign change of the residual on [{lo}, {hi}]; the step is too large for the local curvature")]
    Bracketing { lo: f64, hi: f64 },

    #[error("reflection identity violated by {deviation:e}")]
    IdentityViolation { deviation: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
