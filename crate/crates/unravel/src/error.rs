//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    // ----- dense linear algebra -----
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix exponential overflowed (norm {norm:.3e})")]
    ExpOverflow { norm: f64 },
    #[error("eigenproblem is near-defective (eigenvector condition {condition:.3e})")]
    NearDefective { condition: f64 },
    #[error("QR iteration failed to converge after {iterations} steps")]
    EigenConvergence { iterations: usize },
    #[error("matrix is singular to working precision (pivot {pivot:.3e})")]
    Singular { pivot: f64 },
    #[error("matrix cannot be repaired to a density matrix (clipped trace {trace:.3e})")]
    DegenerateState { trace: f64 },

    // ----- model validation -----
    #[error("hamiltonian is not hermitian (defect {defect:.3e} > {tolerance:.1e})")]
    NonHermitianHamiltonian { defect: f64, tolerance: f64 },
    #[error("model needs at least one jump operator")]
    NoJumpOperators,
    #[error("invariant violated: {invariant} (deviation {deviation:.3e} > {tolerance:.1e})")]
    InvariantViolation {
        invariant: String,
        deviation: f64,
        tolerance: f64,
    },
    #[error("kraus operators do not sum to the identity (deviation {deviation:.3e})")]
    KrausSum { deviation: f64, tolerance: f64 },

    // ----- trajectory simulation -----
    #[error("survival probability {value:.6e} outside [0,1] band; decomposition invalid")]
    SurvivalOutOfRange { value: f64 },
    #[error("survival function is not monotone near t = {t:.6e}; decomposition invalid")]
    NonMonotoneSurvival { t: f64 },
    #[error("all jump rates vanish (dark state); no jump can be sampled")]
    DarkState,
    #[error("jump has vanishing trace {trace:.3e}; forbidden from this state")]
    ForbiddenJump { trace: f64 },
    #[error("click count exceeded the accumulation cap {cap}")]
    ClickCapExceeded { cap: u64 },
    #[error("detection record is out of order at index {index}")]
    RecordOutOfOrder { index: usize },
    #[error("time {t} exceeds the path horizon {horizon}")]
    HorizonExceeded { t: f64, horizon: f64 },
    #[error("state eigenvalue {eigenvalue:.3e} fell below the guard {guard:.1e} at step {step}; dt is too large")]
    EigenvalueGuard {
        step: usize,
        eigenvalue: f64,
        guard: f64,
    },
    #[error("step size {dt} exceeds the allowed maximum {max}")]
    StepTooLarge { dt: f64, max: f64 },

    // ----- ergodic statistics -----
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("fixed space of the semigroup is empty; generator is not trace-preserving")]
    EmptyFixedSpace,

    // ----- configuration / files -----
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("model file error: {0}")]
    ModelFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<V> = std::result::Result<V, Error>;
