//! Lindblad generators and their unraveling decompositions.
//!
//! Conventions, fixed once for the whole crate:
//! - generator `L(rho) = -i[H, rho] + sum_i (V_i rho V_i* - (V_i* V_i rho
//!   + rho V_i* V_i)/2)`, which annihilates the trace;
//! - superoperator matrices act on column-stacked operators.

use crate::error::{Error, Result};
use crate::linalg::matrix_exp;
use crate::mat::{dagger, CMat};
use crate::scalar::Scalar;
use crate::superop::{choi_min_eigenvalue, SuperOp};
use crate::tol::{Tolerances, NO_CLICK_SAMPLE_TIMES};

/// Hamiltonian plus jump operators defining a Lindblad generator.
#[derive(Debug, Clone)]
pub struct LindbladModel<T: Scalar> {
    dim: usize,
    hamiltonian: CMat<T>,
    jump_ops: Vec<CMat<T>>,
}

impl<T: Scalar> LindbladModel<T> {
    pub fn new(hamiltonian: CMat<T>, jump_ops: Vec<CMat<T>>, tol: &Tolerances) -> Result<Self> {
        let d = hamiltonian.nrows();
        if hamiltonian.ncols() != d {
            return Err(Error::NonSquare {
                rows: d,
                cols: hamiltonian.ncols(),
            });
        }
        let defect = crate::mat::hermiticity_defect(&hamiltonian).to_f64_lossy();
        if defect > tol.hermitian {
            return Err(Error::NonHermitianHamiltonian {
                defect,
                tolerance: tol.hermitian,
            });
        }
        if jump_ops.is_empty() {
            return Err(Error::NoJumpOperators);
        }
        for v in &jump_ops {
            if v.dim() != (d, d) {
                return Err(Error::DimensionMismatch {
                    left: v.nrows(),
                    right: d,
                });
            }
            if !crate::mat::all_finite(v) {
                return Err(Error::NonFinite);
            }
        }
        Ok(LindbladModel {
            dim: d,
            hamiltonian,
            jump_ops,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMat<T> {
        &self.hamiltonian
    }

    pub fn jump_ops(&self) -> &[CMat<T>] {
        &self.jump_ops
    }

    pub fn detector_count(&self) -> usize {
        self.jump_ops.len()
    }
}

/// Superoperator matrix of the Lindblad generator of `m`.
pub fn build_generator<T: Scalar>(m: &LindbladModel<T>) -> SuperOp<T> {
    let d = m.dim();
    let half = T::lit(0.5);
    // -i (H x - x H) term.
    let comm = SuperOp::left_mult(&m.hamiltonian).sub(&SuperOp::right_mult(&m.hamiltonian));
    let i_factor = crate::scalar::ci::<T>();
    let mut gen = SuperOp::new(d, comm.mat().mapv(|z| z * (-i_factor))).expect("same shape");
    for v in &m.jump_ops {
        let vdv = dagger(v).dot(v);
        gen = gen.add(&SuperOp::sandwich(v));
        gen = gen.sub(&crate::superop::anticommutator_like(&vdv).scale(half));
    }
    gen
}

/// `L = L0 + sum_i J_i` with completely positive jump maps and a completely
/// positive no-click semigroup.
#[derive(Debug, Clone)]
pub struct Unraveling<T: Scalar> {
    generator: SuperOp<T>,
    no_click: SuperOp<T>,
    jumps: Vec<SuperOp<T>>,
}

/// How to split the generator.
pub enum DecompositionChoice<T: Scalar> {
    /// `J_i(rho) = V_i rho V_i*`, `L0 = L - sum J_i`.
    Natural,
    /// Caller-supplied superoperator matrices.
    Explicit {
        no_click: SuperOp<T>,
        jumps: Vec<SuperOp<T>>,
    },
}

impl<T: Scalar> Unraveling<T> {
    /// Build and validate a decomposition of the generator of `m`.
    pub fn build(
        m: &LindbladModel<T>,
        choice: DecompositionChoice<T>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let generator = build_generator(m);
        let (no_click, jumps) = match choice {
            DecompositionChoice::Natural => {
                let jumps: Vec<SuperOp<T>> =
                    m.jump_ops().iter().map(SuperOp::sandwich).collect();
                let mut no_click = generator.clone();
                for j in &jumps {
                    no_click = no_click.sub(j);
                }
                (no_click, jumps)
            }
            DecompositionChoice::Explicit { no_click, jumps } => (no_click, jumps),
        };
        let u = Unraveling {
            generator,
            no_click,
            jumps,
        };
        u.validate(tol)?;
        Ok(u)
    }

    /// Check every decomposition invariant, naming the first failure.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let d = self.generator.dim();
        if self.no_click.dim() != d || self.jumps.iter().any(|j| j.dim() != d) {
            return Err(Error::DimensionMismatch {
                left: self.no_click.dim(),
                right: d,
            });
        }
        if self.jumps.is_empty() {
            return Err(Error::NoJumpOperators);
        }

        let mut sum = self.no_click.clone();
        for j in &self.jumps {
            sum = sum.add(j);
        }
        let dev = crate::mat::max_abs_diff(sum.mat(), self.generator.mat()).to_f64_lossy();
        if dev > tol.decomposition_sum {
            return Err(Error::InvariantViolation {
                invariant: "L0 + sum J_i = L".into(),
                deviation: dev,
                tolerance: tol.decomposition_sum,
            });
        }

        for (i, j) in self.jumps.iter().enumerate() {
            let min = choi_min_eigenvalue(j).to_f64_lossy();
            if min < tol.choi_psd_floor {
                return Err(Error::InvariantViolation {
                    invariant: format!("complete positivity of jump map {i}"),
                    deviation: min,
                    tolerance: tol.choi_psd_floor,
                });
            }
        }

        for &t in NO_CLICK_SAMPLE_TIMES.iter() {
            let e = matrix_exp(self.no_click.mat(), T::lit(t))?;
            let s = SuperOp::new(d, e)?;
            let min = choi_min_eigenvalue(&s).to_f64_lossy();
            if min < tol.no_click_choi_floor {
                return Err(Error::InvariantViolation {
                    invariant: format!("complete positivity of exp(t L0) at t = {t}"),
                    deviation: min,
                    tolerance: tol.no_click_choi_floor,
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn generator(&self) -> &SuperOp<T> {
        &self.generator
    }

    pub fn no_click(&self) -> &SuperOp<T> {
        &self.no_click
    }

    pub fn jumps(&self) -> &[SuperOp<T>] {
        &self.jumps
    }

    pub fn detector_count(&self) -> usize {
        self.jumps.len()
    }
}

/// `T_t = e^{tL}` for `t >= 0`.
pub fn propagator<T: Scalar>(l: &SuperOp<T>, t: T) -> Result<SuperOp<T>> {
    if t < T::zero() {
        return Err(Error::Config(format!(
            "propagator requires t >= 0, got {t}"
        )));
    }
    SuperOp::new(l.dim(), matrix_exp(l.mat(), t)?)
}
