//! Continuous-time jump trajectories.
//!
//! Between clicks the state follows the normalized no-click semigroup
//! `rho -> e^{tL0} rho / tr(...)`; waiting times are drawn exactly by
//! inverse-transform sampling of the survival probability
//! `tr(e^{tL0} rho)` with bisection, so the click-time law carries no
//! discretization bias. Click types are drawn from the normalized rates
//! `tr J_i(rho)`.

use num_complex::Complex;
use rand::Rng;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::linalg::{eig, trace_of_vectorized, EigDecomposition};
use crate::mat::{CMat, CVec};
use crate::model::Unraveling;
use crate::path::{DetectionEvent, DetectionRecord, SampledPath};
use crate::scalar::{cr, Scalar};
use crate::superop::SuperOp;
use crate::tol::Tolerances;

/// Propagator of the no-click semigroup `e^{tL0}`.
///
/// A cached eigendecomposition serves well-conditioned generators; the
/// near-defective case falls back to one matrix exponential per distinct
/// time step.
pub struct NoClickPropagator<T: Scalar> {
    l0: SuperOp<T>,
    spectral: Option<EigDecomposition<T>>,
}

impl<T: Scalar> NoClickPropagator<T> {
    pub fn new(l0: &SuperOp<T>, tol: &Tolerances) -> Self {
        let spectral = match eig(l0.mat(), tol) {
            Ok(d) if d.condition.to_f64_lossy() <= tol.propagator_condition_max => Some(d),
            _ => None,
        };
        NoClickPropagator {
            l0: l0.clone(),
            spectral,
        }
    }

    pub fn dim(&self) -> usize {
        self.l0.dim()
    }

    /// `e^{tL0} v` for a column-stacked operator `v`.
    pub fn propagate_vec(&self, t: T, v: &CVec<T>) -> Result<CVec<T>> {
        match &self.spectral {
            Some(d) => {
                let mut w = d.inverse.dot(v);
                for (i, lam) in d.values.iter().enumerate() {
                    w[i] *= (*lam * cr(t)).exp();
                }
                Ok(d.vectors.dot(&w))
            }
            None => {
                let e = crate::linalg::matrix_exp(self.l0.mat(), t)?;
                Ok(e.dot(v))
            }
        }
    }

    /// Normalized conditional state after `t` without clicks.
    pub fn conditional_state(&self, t: T, rho: &Density<T>) -> Result<Density<T>> {
        let v = self.propagate_vec(t, &rho.vectorized())?;
        let tr = trace_of_vectorized(&v).re;
        if tr <= T::zero() {
            return Err(Error::SurvivalOutOfRange {
                value: tr.to_f64_lossy(),
            });
        }
        let m = crate::linalg::devectorize(&v)?;
        let normalized = m.mapv(|z| z / cr(tr));
        Ok(Density::from_repaired(crate::mat::hermitize(&normalized)))
    }
}

/// No-click probability `tr(e^{tL0} rho)`; equals 1 at `t = 0` and is
/// nonincreasing in `t` for valid decompositions.
pub fn survival<T: Scalar>(
    rho: &Density<T>,
    t: T,
    prop: &NoClickPropagator<T>,
    tol: &Tolerances,
) -> Result<T> {
    let v = prop.propagate_vec(t, &rho.vectorized())?;
    let s = trace_of_vectorized(&v).re;
    let band = T::lit(tol.survival_band);
    if s < -band || s > T::one() + band {
        return Err(Error::SurvivalOutOfRange {
            value: s.to_f64_lossy(),
        });
    }
    Ok(s.max(T::zero()).min(T::one()))
}

/// Outcome of one waiting-time draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingTime<T: Scalar> {
    JumpAt(T),
    NoJumpBefore(T),
}

/// Invert `survival(rho, t) = u` on `[0, horizon]` by bisection.
///
/// Returns `NoJumpBefore` when the survival probability at the horizon
/// still exceeds `u`. Absolute time tolerance is `bisection_rel * horizon`.
pub fn sample_waiting_time<T: Scalar>(
    rho: &Density<T>,
    u: T,
    horizon: T,
    prop: &NoClickPropagator<T>,
    tol: &Tolerances,
) -> Result<WaitingTime<T>> {
    debug_assert!(u > T::zero() && u < T::one());
    let s_end = survival(rho, horizon, prop, tol)?;
    if s_end >= u {
        return Ok(WaitingTime::NoJumpBefore(horizon));
    }
    let slack = T::lit(1e-9);
    let mut lo = T::zero();
    let mut hi = horizon;
    let mut s_lo = T::one();
    let mut s_hi = s_end;
    let tol_t = T::lit(tol.bisection_rel) * horizon;
    while hi - lo > tol_t {
        let mid = (lo + hi) * T::lit(0.5);
        let s_mid = survival(rho, mid, prop, tol)?;
        if s_mid > s_lo + slack || s_mid < s_hi - slack {
            return Err(Error::NonMonotoneSurvival {
                t: mid.to_f64_lossy(),
            });
        }
        if s_mid >= u {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
            s_hi = s_mid;
        }
    }
    Ok(WaitingTime::JumpAt((lo + hi) * T::lit(0.5)))
}

/// Raw jump rates `tr J_i(rho)`, clamped at zero.
pub fn jump_rates<T: Scalar>(rho: &Density<T>, jumps: &[SuperOp<T>]) -> Result<Vec<T>> {
    jumps
        .iter()
        .map(|j| Ok(j.apply_trace(rho.mat())?.re.max(T::zero())))
        .collect()
}

/// Normalized click-type distribution `tr J_i(rho) / sum_j tr J_j(rho)`.
pub fn jump_probabilities<T: Scalar>(
    rho: &Density<T>,
    jumps: &[SuperOp<T>],
    tol: &Tolerances,
) -> Result<Vec<T>> {
    let rates = jump_rates(rho, jumps)?;
    let total = rates.iter().fold(T::zero(), |acc, &r| acc + r);
    if total.to_f64_lossy() <= tol.rate_floor {
        return Err(Error::DarkState);
    }
    Ok(rates.into_iter().map(|r| r / total).collect())
}

/// Normalized post-jump state `J(rho) / tr J(rho)`.
pub fn apply_jump<T: Scalar>(
    rho: &Density<T>,
    jump: &SuperOp<T>,
    tol: &Tolerances,
) -> Result<Density<T>> {
    let out = jump.apply(rho.mat())?;
    let tr = crate::mat::trace(&out).re;
    if tr.to_f64_lossy() <= tol.rate_floor {
        return Err(Error::ForbiddenJump {
            trace: tr.to_f64_lossy(),
        });
    }
    let normalized = out.mapv(|z| z / cr(tr));
    crate::linalg::project_density(&normalized, tol)
}

/// Inverse-CDF draw over a probability vector with exact cumulative sums;
/// zero-probability outcomes cannot be selected.
pub(crate) fn sample_index<T: Scalar>(probabilities: &[T], u: T) -> usize {
    let mut cum = T::zero();
    let mut last_positive = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p > T::zero() {
            last_positive = i;
            cum = cum + p;
            if u < cum {
                return i;
            }
        }
    }
    last_positive
}

/// Simulate one jump trajectory.
///
/// States are recorded on the uniform grid `0, grid_step, 2 grid_step, ...,
/// horizon` and additionally at every click time. The same stream seed
/// reproduces the same path bit for bit.
pub fn simulate<T: Scalar>(
    unraveling: &Unraveling<T>,
    theta0: &Density<T>,
    horizon: T,
    grid_step: T,
    stream_seed: u64,
    tol: &Tolerances,
) -> Result<SampledPath<T>> {
    if horizon <= T::zero() || grid_step <= T::zero() {
        return Err(Error::Config(
            "horizon and grid_step must be positive".into(),
        ));
    }
    let prop = NoClickPropagator::new(unraveling.no_click(), tol);
    let mut rng = crate::rng::stream_rng(stream_seed, 0);
    simulate_with(unraveling, &prop, theta0, horizon, grid_step, &mut rng, tol)
}

/// Simulation core reusing a prepared propagator and generator; ensembles
/// share the propagator across trajectories.
pub fn simulate_with<T: Scalar, R: Rng>(
    unraveling: &Unraveling<T>,
    prop: &NoClickPropagator<T>,
    theta0: &Density<T>,
    horizon: T,
    grid_step: T,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<SampledPath<T>> {
    let n_cells = (horizon / grid_step).ceil().to_f64_lossy() as usize;
    let grid_time = |i: usize| -> T {
        if i >= n_cells {
            horizon
        } else {
            grid_step * T::from_usize(i).unwrap()
        }
    };

    let mut times: Vec<T> = vec![T::zero()];
    let mut states: Vec<Density<T>> = vec![theta0.clone()];
    let mut record = DetectionRecord::empty();

    let mut seg_start = T::zero();
    let mut seg_state = theta0.clone();
    let mut next_grid = 1usize;
    let mut clicks: u64 = 0;

    loop {
        let remaining = horizon - seg_start;
        if remaining <= T::zero() {
            break;
        }
        let u = T::unit_open(rng);
        match sample_waiting_time(&seg_state, u, remaining, prop, tol)? {
            WaitingTime::NoJumpBefore(_) => {
                while next_grid <= n_cells {
                    let t = grid_time(next_grid);
                    let state = prop.conditional_state(t - seg_start, &seg_state)?;
                    push_node(&mut times, &mut states, t, state);
                    next_grid += 1;
                }
                break;
            }
            WaitingTime::JumpAt(wait) => {
                let t_click = seg_start + wait;
                while next_grid <= n_cells && grid_time(next_grid) < t_click {
                    let t = grid_time(next_grid);
                    let state = prop.conditional_state(t - seg_start, &seg_state)?;
                    push_node(&mut times, &mut states, t, state);
                    next_grid += 1;
                }
                let pre = prop.conditional_state(wait, &seg_state)?;
                let probs = jump_probabilities(&pre, unraveling.jumps(), tol)?;
                let v = T::unit_open(rng);
                let detector = sample_index(&probs, v);
                let post = apply_jump(&pre, &unraveling.jumps()[detector], tol)?;

                clicks += 1;
                if clicks > tol.click_cap {
                    return Err(Error::ClickCapExceeded { cap: tol.click_cap });
                }
                record.push(DetectionEvent {
                    time: t_click,
                    detector,
                });
                push_node(&mut times, &mut states, t_click, post.clone());
                // A click landing exactly on a grid node replaces it.
                if next_grid <= n_cells && grid_time(next_grid) == t_click {
                    next_grid += 1;
                }
                seg_start = t_click;
                seg_state = post;
            }
        }
    }

    SampledPath::new(times, states, record)
}

fn push_node<T: Scalar>(times: &mut Vec<T>, states: &mut Vec<Density<T>>, t: T, state: Density<T>) {
    if let Some(&last) = times.last() {
        if t <= last {
            // Coincident click/grid node: keep the later (post-jump) state.
            *states.last_mut().unwrap() = state;
            return;
        }
    }
    times.push(t);
    states.push(state);
}

/// Unnormalized state and click density of a fixed record at time `t`:
/// alternate no-click propagation with the recorded jump maps, then read
/// off the trace.
pub fn record_density<T: Scalar>(
    unraveling: &Unraveling<T>,
    record: &DetectionRecord<T>,
    theta0: &Density<T>,
    t: T,
    tol: &Tolerances,
) -> Result<(CMat<T>, T)> {
    let prop = NoClickPropagator::new(unraveling.no_click(), tol);
    let mut v = theta0.vectorized();
    let mut prev = T::zero();
    for (i, event) in record.events().iter().enumerate() {
        if event.time > t {
            return Err(Error::HorizonExceeded {
                t: event.time.to_f64_lossy(),
                horizon: t.to_f64_lossy(),
            });
        }
        if event.time < prev {
            return Err(Error::RecordOutOfOrder { index: i });
        }
        v = prop.propagate_vec(event.time - prev, &v)?;
        v = unraveling.jumps()[event.detector].apply_vec(&v);
        prev = event.time;
    }
    v = prop.propagate_vec(t - prev, &v)?;
    let density = trace_of_vectorized(&v).re;
    Ok((crate::linalg::devectorize(&v)?, density))
}

/// Counting-process diagnostics along one path.
#[derive(Debug, Clone)]
pub struct CountingDiagnostics<T: Scalar> {
    /// Grid times, shared with the path.
    pub times: Vec<T>,
    /// `N_t^i`: clicks of each detector up to each grid time.
    pub counts: Vec<Vec<u64>>,
    /// Compensators `int_0^t tr J_i(Theta_u) du` on the same grid.
    pub compensators: Vec<Vec<T>>,
    /// Residual martingale `M_t = Theta_t - theta0 - int_0^t L(Theta_s) ds`.
    pub martingale: Vec<CMat<T>>,
}

impl<T: Scalar> CountingDiagnostics<T> {
    /// Compensated count `N_t^i - int_0^t tr J_i` at the grid node closest
    /// to `t` from below.
    pub fn compensated_at(&self, detector: usize, t: T) -> T {
        let idx = node_index(&self.times, t);
        T::from_u64(self.counts[detector][idx]).unwrap() - self.compensators[detector][idx]
    }

    pub fn martingale_at(&self, t: T) -> &CMat<T> {
        &self.martingale[node_index(&self.times, t)]
    }
}

fn node_index<T: Scalar>(times: &[T], t: T) -> usize {
    let mut idx = 0;
    for (i, &ti) in times.iter().enumerate() {
        if ti <= t {
            idx = i;
        } else {
            break;
        }
    }
    idx
}

/// Counting processes, their compensators, and the residual martingale of
/// one path.
///
/// Rate and generator integrands are integrated by the trapezoid rule on
/// the path grid. At click nodes the stored state is the post-jump state;
/// the left limit needed for exactness there is recomputed through the
/// no-click flow from the previous node, so integrands see the pre-jump
/// value on the segment ending at the click.
pub fn counting_diagnostics<T: Scalar>(
    path: &SampledPath<T>,
    generator: &SuperOp<T>,
    jumps: &[SuperOp<T>],
    tol: &Tolerances,
) -> Result<CountingDiagnostics<T>> {
    let k = jumps.len();
    let n = path.len();
    let times = path.times().to_vec();
    let states = path.states();

    // L0 = L - sum J_i reconstructs the no-click flow for left limits.
    let mut l0 = generator.clone();
    for j in jumps {
        l0 = l0.sub(j);
    }
    let prop = NoClickPropagator::new(&l0, tol);

    let click_times: Vec<T> = path.record().events().iter().map(|e| e.time).collect();
    let is_click = |t: T| click_times.iter().any(|&ct| ct == t);

    let mut counts = vec![vec![0u64; n]; k];
    for (i, column) in counts.iter_mut().enumerate() {
        for (m, &t) in times.iter().enumerate() {
            column[m] = path.record().count_up_to(i, t);
        }
    }

    // Integrand values at segment endpoints: rates and generator images.
    let rate_of = |state: &Density<T>| -> Result<Vec<T>> { jump_rates(state, jumps) };
    let gen_of = |state: &Density<T>| -> Result<CMat<T>> { generator.apply(state.mat()) };

    let d = generator.dim();
    let mut compensators = vec![vec![T::zero(); n]; k];
    let mut martingale: Vec<CMat<T>> = Vec::with_capacity(n);
    martingale.push(CMat::zeros((d, d)));

    let mut acc_rates = vec![T::zero(); k];
    let mut acc_gen = CMat::<T>::zeros((d, d));
    let mut left_rates = rate_of(&states[0])?;
    let mut left_gen = gen_of(&states[0])?;

    for m in 1..n {
        let dt = times[m] - times[m - 1];
        let right_state = if is_click(times[m]) {
            prop.conditional_state(dt, &states[m - 1])?
        } else {
            states[m].clone()
        };
        let right_rates = rate_of(&right_state)?;
        let right_gen = gen_of(&right_state)?;
        let half_dt = dt * T::lit(0.5);
        for i in 0..k {
            acc_rates[i] = acc_rates[i] + (left_rates[i] + right_rates[i]) * half_dt;
            compensators[i][m] = acc_rates[i];
        }
        let seg = (&left_gen + &right_gen).mapv(|z| z * cr(half_dt));
        acc_gen = &acc_gen + &seg;
        martingale.push(states[m].mat() - states[0].mat() - &acc_gen);

        // The integrand continues from the post-jump state.
        left_rates = rate_of(&states[m])?;
        left_gen = gen_of(&states[m])?;
    }

    Ok(CountingDiagnostics {
        times,
        counts,
        compensators,
        martingale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::basis_mat;
    use crate::model::{build_generator, DecompositionChoice, LindbladModel, Unraveling};

    fn amplitude_damping() -> Unraveling<f64> {
        let h = CMat::<f64>::zeros((2, 2));
        let v = basis_mat(2, 0, 1);
        let m = LindbladModel::new(h, vec![v], &Tolerances::default()).unwrap();
        Unraveling::build(&m, DecompositionChoice::Natural, &Tolerances::default()).unwrap()
    }

    fn dephasing() -> Unraveling<f64> {
        let h = CMat::<f64>::zeros((2, 2));
        let m = LindbladModel::new(
            h,
            vec![basis_mat(2, 0, 0), basis_mat(2, 1, 1)],
            &Tolerances::default(),
        )
        .unwrap();
        Unraveling::build(&m, DecompositionChoice::Natural, &Tolerances::default()).unwrap()
    }

    #[test]
    fn survival_of_excited_state_is_exponential() {
        let u = amplitude_damping();
        let tol = Tolerances::default();
        let prop = NoClickPropagator::new(u.no_click(), &tol);
        let excited = Density::basis(2, 1).unwrap();
        for &t in &[0.0, 0.5, 1.0, 3.0] {
            let s = survival(&excited, t, &prop, &tol).unwrap();
            assert!((s - (-t).exp()).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn survival_of_dark_state_is_one() {
        let u = amplitude_damping();
        let tol = Tolerances::default();
        let prop = NoClickPropagator::new(u.no_click(), &tol);
        let ground = Density::basis(2, 0).unwrap();
        for &t in &[0.1, 1.0, 10.0] {
            assert!((survival(&ground, t, &prop, &tol).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn waiting_time_inverts_exponential() {
        let u = amplitude_damping();
        let tol = Tolerances::default();
        let prop = NoClickPropagator::new(u.no_click(), &tol);
        let excited = Density::basis(2, 1).unwrap();
        match sample_waiting_time(&excited, 0.5, 10.0, &prop, &tol).unwrap() {
            WaitingTime::JumpAt(t) => assert!((t - 2f64.ln()).abs() < 1e-7),
            other => panic!("expected a jump, got {other:?}"),
        }
    }

    #[test]
    fn waiting_time_dark_state_never_jumps() {
        let u = amplitude_damping();
        let tol = Tolerances::default();
        let prop = NoClickPropagator::new(u.no_click(), &tol);
        let ground = Density::basis(2, 0).unwrap();
        assert_eq!(
            sample_waiting_time(&ground, 0.99, 5.0, &prop, &tol).unwrap(),
            WaitingTime::NoJumpBefore(5.0)
        );
    }

    #[test]
    fn waiting_time_near_one_is_near_zero() {
        let u = amplitude_damping();
        let tol = Tolerances::default();
        let prop = NoClickPropagator::new(u.no_click(), &tol);
        let excited = Density::basis(2, 1).unwrap();
        match sample_waiting_time(&excited, 1.0 - 1e-12, 10.0, &prop, &tol).unwrap() {
            WaitingTime::JumpAt(t) => assert!(t < 1e-7),
            other => panic!("expected a jump, got {other:?}"),
        }
    }

    #[test]
    fn jump_probability_normalization() {
        let tol = Tolerances::default();
        let u = dephasing();
        let plus = Density::plus().unwrap();
        let p = jump_probabilities(&plus, u.jumps(), &tol).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.5).abs() < 1e-12);

        let single = amplitude_damping();
        let excited = Density::basis(2, 1).unwrap();
        let p = jump_probabilities(&excited, single.jumps(), &tol).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jump_probabilities_dark_state_errors() {
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let ground = Density::basis(2, 0).unwrap();
        assert!(matches!(
            jump_probabilities(&ground, u.jumps(), &tol),
            Err(Error::DarkState)
        ));
    }

    #[test]
    fn apply_jump_amplitude_damping() {
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let excited = Density::basis(2, 1).unwrap();
        let after = apply_jump(&excited, &u.jumps()[0], &tol).unwrap();
        assert!(crate::mat::max_abs_diff(after.mat(), &basis_mat(2, 0, 0)) < 1e-12);

        // From the maximally mixed state the same jump also lands in the
        // ground state: V (I/2) V* = |0><0| / 2, normalized.
        let mixed = Density::maximally_mixed(2).unwrap();
        let after = apply_jump(&mixed, &u.jumps()[0], &tol).unwrap();
        assert!(crate::mat::max_abs_diff(after.mat(), &basis_mat(2, 0, 0)) < 1e-12);
    }

    #[test]
    fn apply_identity_jump_is_identity() {
        let tol = Tolerances::default();
        let plus = Density::<f64>::plus().unwrap();
        let id = SuperOp::identity(2);
        let after = apply_jump(&plus, &id, &tol).unwrap();
        assert!(crate::mat::max_abs_diff(after.mat(), plus.mat()) < 1e-12);
    }

    #[test]
    fn apply_forbidden_jump_errors() {
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let ground = Density::basis(2, 0).unwrap();
        assert!(matches!(
            apply_jump(&ground, &u.jumps()[0], &tol),
            Err(Error::ForbiddenJump { .. })
        ));
    }

    #[test]
    fn amplitude_damping_path_has_at_most_one_click() {
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let excited = Density::basis(2, 1).unwrap();
        for seed in 0..50 {
            let path = simulate(&u, &excited, 20.0, 0.5, seed, &tol).unwrap();
            assert!(path.record().len() <= 1, "seed {seed}");
            if let Some(event) = path.record().events().first() {
                let after = path.state_at_or_before(path.horizon()).unwrap();
                assert!(
                    crate::mat::max_abs_diff(after.mat(), &basis_mat(2, 0, 0)) < 1e-9,
                    "absorbed into the ground state, seed {seed} event {event:?}"
                );
            }
        }
    }

    #[test]
    fn clickless_model_follows_hamiltonian_flow() {
        let tol = Tolerances::default();
        let h = ndarray::array![
            [crate::scalar::c(1.0, 0.0), crate::scalar::c(0.0, 0.0)],
            [crate::scalar::c(0.0, 0.0), crate::scalar::c(-1.0, 0.0)]
        ];
        let m = LindbladModel::new(h, vec![CMat::zeros((2, 2))], &tol).unwrap();
        let u = Unraveling::build(&m, DecompositionChoice::Natural, &tol).unwrap();
        let plus = Density::plus().unwrap();
        let path = simulate(&u, &plus, 2.0, 0.25, 7, &tol).unwrap();
        assert!(path.record().is_empty());
        // Coherence rotates with frequency 2: rho01(t) = e^{-2it}/2.
        let l = build_generator(&m);
        for (idx, &t) in path.times().iter().enumerate() {
            let expected = crate::model::propagator(&l, t)
                .unwrap()
                .apply(plus.mat())
                .unwrap();
            assert!(
                crate::mat::max_abs_diff(path.states()[idx].mat(), &expected) < 1e-9,
                "t = {t}"
            );
        }
    }

    #[test]
    fn dephasing_absorbs_after_first_click() {
        let tol = Tolerances::default();
        let u = dephasing();
        let plus = Density::plus().unwrap();
        let mut seen = [false, false];
        for seed in 0..40 {
            let path = simulate(&u, &plus, 6.0, 0.5, seed, &tol).unwrap();
            if path.record().is_empty() {
                continue;
            }
            let first = path.record().events()[0];
            let absorbed = basis_mat(2, first.detector, first.detector);
            seen[first.detector] = true;
            for (idx, &t) in path.times().iter().enumerate() {
                if t >= first.time {
                    assert!(
                        crate::mat::max_abs_diff(path.states()[idx].mat(), &absorbed) < 1e-9,
                        "after the first click the state is pinned"
                    );
                }
            }
        }
        assert!(seen[0] && seen[1], "both absorption targets observed");
    }

    #[test]
    fn same_seed_same_path() {
        let tol = Tolerances::default();
        let u = dephasing();
        let plus = Density::plus().unwrap();
        let a = simulate(&u, &plus, 10.0, 0.1, 99, &tol).unwrap();
        let b = simulate(&u, &plus, 10.0, 0.1, 99, &tol).unwrap();
        assert_eq!(a.times(), b.times());
        assert_eq!(a.record(), b.record());
        for (x, y) in a.states().iter().zip(b.states().iter()) {
            assert_eq!(x.mat(), y.mat());
        }
    }

    #[test]
    fn record_density_empty_record_is_survival() {
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let excited = Density::basis(2, 1).unwrap();
        let (theta, density) =
            record_density(&u, &DetectionRecord::empty(), &excited, 1.3, &tol).unwrap();
        assert!((density - (-1.3f64).exp()).abs() < 1e-12);
        assert!((theta[[1, 1]].re - (-1.3f64).exp()).abs() < 1e-12);

        let (theta0, density0) =
            record_density(&u, &DetectionRecord::empty(), &excited, 0.0, &tol).unwrap();
        assert!((density0 - 1.0).abs() < 1e-14);
        assert!(crate::mat::max_abs_diff(&theta0, excited.mat()) < 1e-14);
    }

    #[test]
    fn record_density_single_click_closed_form() {
        // Click at s, then the dark state: density is e^{-s} independent
        // of t > s.
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let excited = Density::basis(2, 1).unwrap();
        let s = 0.8;
        let record = DetectionRecord::new(vec![DetectionEvent {
            time: s,
            detector: 0,
        }])
        .unwrap();
        let (_, density) = record_density(&u, &record, &excited, 2.0, &tol).unwrap();
        assert!((density - (-s as f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn record_density_matches_simulated_path() {
        let tol = Tolerances::default();
        let u = dephasing();
        let plus = Density::plus().unwrap();
        let path = simulate(&u, &plus, 5.0, 0.25, 3, &tol).unwrap();
        for (idx, &t) in path.times().iter().enumerate() {
            let sub_events: Vec<DetectionEvent<f64>> = path
                .record()
                .events()
                .iter()
                .copied()
                .filter(|e| e.time <= t)
                .collect();
            let record = DetectionRecord::new(sub_events).unwrap();
            let (theta, density) = record_density(&u, &record, &plus, t, &tol).unwrap();
            assert!(density > 0.0);
            let normalized = theta.mapv(|z| z / crate::scalar::cr(density));
            let dist = crate::linalg::trace_distance_mats(&normalized, path.states()[idx].mat());
            assert!(dist < 1e-6, "t = {t}, distance {dist}");
        }
    }

    #[test]
    fn diagnostics_clickless_model_are_zero() {
        let tol = Tolerances::default();
        let h = CMat::<f64>::zeros((2, 2));
        let m = LindbladModel::new(h, vec![CMat::zeros((2, 2))], &tol).unwrap();
        let u = Unraveling::build(&m, DecompositionChoice::Natural, &tol).unwrap();
        let plus = Density::plus().unwrap();
        let path = simulate(&u, &plus, 3.0, 0.5, 1, &tol).unwrap();
        let diag = counting_diagnostics(&path, u.generator(), u.jumps(), &tol).unwrap();
        for column in &diag.counts {
            assert!(column.iter().all(|&c| c == 0));
        }
        for column in &diag.compensators {
            assert!(column.iter().all(|&c| c.abs() < 1e-12));
        }
        for m_t in &diag.martingale {
            assert!(crate::mat::max_abs(m_t) < 1e-10);
        }
    }

    #[test]
    fn compensated_count_is_negative_before_first_click() {
        let tol = Tolerances::default();
        let u = amplitude_damping();
        let excited = Density::basis(2, 1).unwrap();
        // Find a path whose first click happens after t = 0.5.
        for seed in 0..100 {
            let path = simulate(&u, &excited, 4.0, 0.05, seed, &tol).unwrap();
            let first = path.record().events().first().map(|e| e.time);
            if first.map(|t| t > 0.5).unwrap_or(true) {
                let diag = counting_diagnostics(&path, u.generator(), u.jumps(), &tol).unwrap();
                let value = diag.compensated_at(0, 0.5);
                // Rate is exactly 1 before the click, so the compensated
                // count at t is -t.
                assert!((value + 0.5).abs() < 1e-9, "seed {seed}, value {value}");
                return;
            }
        }
        panic!("no suitable path found");
    }

    #[test]
    fn survival_nonincreasing_on_random_pairs() {
        let tol = Tolerances::default();
        let u = dephasing();
        let prop = NoClickPropagator::new(u.no_click(), &tol);
        let mut rng = crate::rng::stream_rng(17, 0);
        for _ in 0..100 {
            let rho = crate::sample::random_density(2, &mut rng);
            let t1 = 3.0 * f64::unit_open(&mut rng);
            let t2 = t1 + 2.0 * f64::unit_open(&mut rng);
            let s1 = survival(&rho, t1, &prop, &tol).unwrap();
            let s2 = survival(&rho, t2, &prop, &tol).unwrap();
            assert!(s2 <= s1 + 1e-11, "survival must not increase");
        }
    }
}
