use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("steady state is not unique: {null_dim} singular values below tolerance")]
    DegenerateSteadyState { null_dim: usize },

    #[error("steady-state solve failed: {0}")]
    SolverFailure(String),

    #[error("time step {dt} too large: trace drifted by {drift:e}")]
    StepTooLarge { dt: f64, drift: f64 },

    #[error("observable undefined without drive (p_inc = 0)")]
    ZeroDrive,

    #[error("intracavity grid needs at least {min} points, got {got}")]
    GridTooCoarse { got: usize, min: usize },

    #[error("emitter separation is zero, there is no cavity")]
    EmptyCavity,

    #[error("first-order solution has a pole (|denominator| = {0:e})")]
    SingularDenominator(f64),

    #[error("mean-field integration did not converge: derivative norm {residual:e} at t = {time}")]
    NoConvergence { residual: f64, time: f64 },

    #[error("config error: {0}")]
    Config(String),
}
