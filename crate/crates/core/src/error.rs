use thiserror::Error;

use crate::schedc::ScheduleError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("amplitudes are not normalized: |alpha|^2 + |beta|^2 = {norm}")]
    Normalization { norm: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("site {0} appears more than once in a single product")]
    DuplicateSite(usize),

    #[error("post-selection probability {0:e} is below 1e-14")]
    ZeroProbability(f64),

    #[error("operator is not Hermitian (max |A - A^dagger| = {0:e})")]
    NonHermitian(f64),

    #[error("negative eigenvalue {0:e} below tolerance")]
    NegativeEigenvalue(f64),

    #[error("step size too large: gamma * dt = {0:e} exceeds 1e-2")]
    StepSize(f64),

    #[error("decay fit failed: {0}")]
    Fit(String),

    #[error("photon cutoff unsound: {0}")]
    Cutoff(String),

    #[error("dimension {dim} exceeds the cap of {cap} (set BOSEQ_DIM_CAP to override)")]
    DimensionCap { dim: usize, cap: usize },

    #[error(
        "ambiguous measurement outcome: overlap_plus = {overlap_plus:.6}, overlap_minus = {overlap_minus:.6}"
    )]
    AmbiguousOutcome {
        overlap_plus: f64,
        overlap_minus: f64,
    },

    #[error("trajectory has no interior maximum on the sampled interval")]
    NoPeak,

    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

impl Error {
    /// True for refusals caused by size or truncation limits rather than bad input.
    pub fn is_numerical_cap(&self) -> bool {
        matches!(self, Error::DimensionCap { .. } | Error::Cutoff(_))
    }
}
