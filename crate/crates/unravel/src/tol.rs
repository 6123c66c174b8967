//! Numerical tolerances.
//!
//! Defaults live here as named constants; every entry can be overridden
//! through [`Tolerances`], which validation and simulation entry points
//! accept explicitly. The CLI additionally maps `UNRAVEL_TOL_*` environment
//! variables onto these fields.

/// Max-entry hermiticity defect accepted for density matrices and
/// Hamiltonians.
pub const HERMITIAN: f64 = 1e-10;
/// Deviation of the trace from one accepted for density matrices.
pub const TRACE_ONE: f64 = 1e-10;
/// Most negative eigenvalue accepted for density matrices.
pub const PSD_FLOOR: f64 = -1e-10;
/// Entrywise residual accepted for `L0 + sum J_i = L`.
pub const DECOMPOSITION_SUM: f64 = 1e-10;
/// Most negative Choi eigenvalue accepted for jump maps.
pub const CHOI_PSD_FLOOR: f64 = -1e-9;
/// Most negative Choi eigenvalue accepted for the no-click semigroup at the
/// sampled times.
pub const NO_CLICK_CHOI_FLOOR: f64 = -1e-8;
/// Times at which complete positivity of the no-click semigroup is
/// spot-checked.
pub const NO_CLICK_SAMPLE_TIMES: [f64; 3] = [0.01, 0.1, 1.0];
/// Relative reconstruction residual accepted from the eigensolver.
pub const EIG_RESIDUAL: f64 = 1e-8;
/// Eigenvector-matrix condition number above which an eigenproblem is
/// reported near-defective.
pub const EIG_CONDITION_MAX: f64 = 1e12;
/// Eigenvector-matrix condition number up to which the no-click propagator
/// uses a cached eigendecomposition instead of per-step exponentials.
pub const PROPAGATOR_CONDITION_MAX: f64 = 1e8;
/// Deviation of `sum V_i* V_i` from the identity accepted for Kraus models.
pub const KRAUS_SUM: f64 = 1e-10;
/// Scale factor for the eigenvalue-zero cluster of a generator
/// (multiplied by `max(1, norm(L))`).
pub const SPECTRAL_ZERO: f64 = 1e-9;
/// Entrywise residual accepted for idempotence and invariance of a
/// spectral-method mean projector.
pub const PROJECTOR_RESIDUAL: f64 = 1e-8;
/// Clipped trace below which a matrix cannot be repaired to a density
/// matrix.
pub const DEGENERATE_TRACE: f64 = 1e-12;
/// Band around [0, 1] within which survival probabilities must fall.
pub const SURVIVAL_BAND: f64 = 1e-9;
/// Total jump rate below which a state counts as dark.
pub const RATE_FLOOR: f64 = 1e-14;
/// Waiting-time bisection tolerance, relative to the horizon.
pub const BISECTION_REL: f64 = 1e-9;
/// Default cap on clicks per trajectory.
pub const CLICK_CAP: u64 = 10_000_000;
/// Horizon of the quadrature route to the mean projector.
pub const QUADRATURE_HORIZON: f64 = 1e3;
/// Largest admissible Euler-Maruyama step.
pub const MAX_EM_DT: f64 = 0.1;
/// Default eigenvalue guard for the diffusive integrator.
pub const MIN_EIG_GUARD: f64 = -1e-3;

/// Runtime-overridable tolerance set. `Default` reproduces the module
/// constants.
#[derive(Debug, Clone)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace_one: f64,
    pub psd_floor: f64,
    pub decomposition_sum: f64,
    pub choi_psd_floor: f64,
    pub no_click_choi_floor: f64,
    pub eig_residual: f64,
    pub eig_condition_max: f64,
    pub propagator_condition_max: f64,
    pub kraus_sum: f64,
    pub spectral_zero: f64,
    pub projector_residual: f64,
    pub degenerate_trace: f64,
    pub survival_band: f64,
    pub rate_floor: f64,
    pub bisection_rel: f64,
    pub click_cap: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: HERMITIAN,
            trace_one: TRACE_ONE,
            psd_floor: PSD_FLOOR,
            decomposition_sum: DECOMPOSITION_SUM,
            choi_psd_floor: CHOI_PSD_FLOOR,
            no_click_choi_floor: NO_CLICK_CHOI_FLOOR,
            eig_residual: EIG_RESIDUAL,
            eig_condition_max: EIG_CONDITION_MAX,
            propagator_condition_max: PROPAGATOR_CONDITION_MAX,
            kraus_sum: KRAUS_SUM,
            spectral_zero: SPECTRAL_ZERO,
            projector_residual: PROJECTOR_RESIDUAL,
            degenerate_trace: DEGENERATE_TRACE,
            survival_band: SURVIVAL_BAND,
            rate_floor: RATE_FLOOR,
            bisection_rel: BISECTION_REL,
            click_cap: CLICK_CAP,
        }
    }
}
