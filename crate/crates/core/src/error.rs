use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The stereographic chart xi = alpha/beta has its pole at beta = 0.
    #[error("chart singularity: {0} vanishes, xi is undefined in this chart")]
    ChartSingularity(&'static str),

    #[error("clock reading outside amplitude range: |q2| = {q2} > B = {amplitude}")]
    ClockOutOfRange { q2: f64, amplitude: f64 },

    /// E' = E/(hbar omega) - 1 is not an integer, so the physical subspace is null.
    #[error("null physical subspace: E' is {residual} away from the nearest integer")]
    NullSubspace { residual: f64 },

    #[error("spin mismatch: 2j = {left} vs 2j = {right}")]
    SpinMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("reference angle {theta} sits on the chart pole; evaluate it on the antipodal chart")]
    ChartPole { theta: f64 },

    #[error("degenerate label: {0}")]
    Degenerate(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
