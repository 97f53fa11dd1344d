use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta series does not converge: {0}")]
    NonConvergent(String),

    #[error("evaluation at or near a pole: {0}")]
    PoleError(String),

    #[error("singularity of the integrand lies on the integration path: {0}")]
    BranchPointOnPath(String),

    #[error("parameter at an excluded value: {0}")]
    SingularParameter(String),

    #[error("branch point y = 0 reached: {0}")]
    BranchError(String),

    #[error("state sits on the theta1 = 0 pole of the vector field")]
    PoleState,

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("moments of inertia must be pairwise distinct (A={a}, B={b}, C={c})")]
    DegenerateInertia { a: f64, b: f64, c: f64 },

    #[error("integrator step size collapsed to {h:e} at t = {t}")]
    StepUnderflow { t: f64, h: f64 },

    #[error("jacobian of the coordinate change is singular at the given point")]
    SingularJacobian,

    #[error("planar field component A vanishes at ({x}, {y})")]
    FieldZero { x: String, y: String },

    #[error("operator output degree {degree} exceeds truncation degree {max}")]
    TruncationOverflow { degree: u32, max: u32 },

    #[error("operator identity `{identity}` fails on monomial x^{a} y^{b}")]
    IdentityViolation { identity: String, a: u32, b: u32 },

    #[error("eigenvalues not converged: edge shift {shift:e} exceeds {tol:e}")]
    NotConverged { shift: f64, tol: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
