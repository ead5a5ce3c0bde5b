use thiserror::Error;

/// Errors raised by the model, the oracles, and the measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative time {0} (only causal evaluation is defined)")]
    NegativeTime(f64),

    #[error("amplitudes are not normalized: squared norm {norm_sqr} (expected 1)")]
    Normalization { norm_sqr: f64 },

    #[error("decay rate diverges at t = {t}: |G(t)| = {g_abs:e}")]
    DecayRatePole { t: f64, g_abs: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} exceeds the supported maximum")]
    DimensionOverflow(usize),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NonHermitian(f64),

    #[error("{algorithm} did not converge within {iterations} iterations")]
    NoConvergence { algorithm: &'static str, iterations: usize },

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("integration broke down at t = {t}: step size {step:e} underflowed")]
    StepSizeUnderflow { t: f64, step: f64 },

    #[error("integration exceeded {steps} steps at t = {t}")]
    TooManySteps { t: f64, steps: usize },

    #[error("time grid invalid: {0}")]
    TimeGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
