use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} is {left_dim}, {right} is {right_dim}")]
    DimensionMismatch {
        left: &'static str,
        left_dim: usize,
        right: &'static str,
        right_dim: usize,
    },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "integration failure at t = {time:e} s: trace drift {drift:e} exceeds {limit:e}; \
         reduce the step factor or switch to scaled units"
    )]
    IntegrationFailure { time: f64, drift: f64, limit: f64 },

    #[error("spin quantum number must be positive (got 2I = {0})")]
    InvalidSpin(i64),

    #[error("transition {from} -> {to} has |Δm| = {delta}; only |Δm| = 1 or 2 is driven by the quadrupole interaction")]
    UnsupportedTransition {
        from: String,
        to: String,
        delta: String,
    },

    #[error("projection {m} is not a level of a spin with 2I = {two_i}")]
    InvalidProjection { m: String, two_i: u32 },

    #[error("transition {from} -> {to} has zero amplitude: {reason}")]
    ZeroAmplitude {
        from: String,
        to: String,
        reason: String,
    },

    #[error("nucleus {0} has I <= 1/2 and no quadrupole moment")]
    NoQuadrupole(String),

    #[error("tensor is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("tensor is not traceless (trace {trace:e}, norm {norm:e})")]
    NotTraceless { trace: f64, norm: f64 },

    #[error("asymmetry parameter is undefined for a zero tensor")]
    UndefinedAsymmetry,

    #[error("no steady state: the decay rate must be positive")]
    NoSteadyState,

    #[error("samples are not uniform over one period: {0}")]
    NonUniformSampling(String),

    #[error("EFG table, line {line}: {message}")]
    Table { line: u64, message: String },

    #[error(
        "field value {field} lies outside the tabulated range [{min}, {max}] for state '{state}'"
    )]
    Extrapolation {
        field: f64,
        min: f64,
        max: f64,
        state: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
