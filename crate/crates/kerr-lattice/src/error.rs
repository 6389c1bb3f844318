//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A series recursion denominator was exactly zero (only possible at
    /// γ = 0 exactly on a multiphoton resonance).
    #[error("series recursion hit an exact pole at term {term}")]
    PoleHit { term: usize },

    #[error("series did not converge within {max_terms} terms (last |term|/|sum| = {last_ratio:.3e})")]
    NoConvergence { max_terms: usize, last_ratio: f64 },

    #[error("leading cubic coefficient is zero")]
    DegenerateCubic,

    #[error("no fixed point found from any seed")]
    NoneFound,

    #[error("g2 is undefined: mean photon number {n_mean:.3e} is below threshold")]
    G2Undefined { n_mean: f64 },

    #[error("Fock truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("steady-state kernel is degenerate (second direction at |eigenvalue| = {second:.3e})")]
    DegenerateKernel { second: f64 },

    #[error("adaptive truncation would exceed the ceiling n_max = {ceiling}")]
    TruncationCeiling { ceiling: usize },

    #[error("xi = {xi} lies outside [0, 1)")]
    XiOutOfRange { xi: f64 },

    #[error("U/Δω = {u} is within the guard radius {guard} of a multiphoton resonance")]
    NearResonance { u: f64, guard: f64 },

    #[error("resonant mean-field coherence diverges at the critical coupling J = {j_critical:.6e}")]
    AtCriticalCoupling { j_critical: f64 },

    #[error("time step {dt:.3e} exceeds the stability bound {max_dt:.3e}")]
    StepTooLarge { dt: f64, max_dt: f64 },

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),

    #[error("steady-state residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    SteadyStateResidual { residual: f64, tol: f64 },

    #[error("density matrix validation failed: {0}")]
    InvalidState(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("linear algebra backend error: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
