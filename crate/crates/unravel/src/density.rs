//! Validated density matrices.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{CMat, CVec};
use crate::scalar::{cr, Scalar};
use crate::tol::Tolerances;

/// Hermitian, positive-semidefinite, unit-trace matrix: the state of the
/// system.
///
/// Construction through [`Density::new`] checks all three invariants
/// against the supplied tolerances; the simulators use the `pub(crate)`
/// fast path for states that are valid by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T: Scalar> {
    mat: CMat<T>,
}

impl<T: Scalar> Density<T> {
    pub fn new(mat: CMat<T>, tol: &Tolerances) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c {
            return Err(Error::NonSquare { rows: r, cols: c });
        }
        if !crate::mat::all_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let herm = crate::mat::hermiticity_defect(&mat).to_f64_lossy();
        if herm > tol.hermitian {
            return Err(Error::InvariantViolation {
                invariant: "density matrix hermiticity".into(),
                deviation: herm,
                tolerance: tol.hermitian,
            });
        }
        let tr = crate::mat::trace(&mat);
        let tr_dev = (tr - Complex::new(T::one(), T::zero()))
            .norm()
            .to_f64_lossy();
        if tr_dev > tol.trace_one {
            return Err(Error::InvariantViolation {
                invariant: "density matrix unit trace".into(),
                deviation: tr_dev,
                tolerance: tol.trace_one,
            });
        }
        let min_eig = crate::linalg::min_eigenvalue(&mat).to_f64_lossy();
        if min_eig < tol.psd_floor {
            return Err(Error::InvariantViolation {
                invariant: "density matrix positive semidefiniteness".into(),
                deviation: min_eig,
                tolerance: tol.psd_floor,
            });
        }
        Ok(Density { mat })
    }

    /// States produced by trusted internal transformations (normalized CP
    /// maps of valid states, spectral repair).
    pub(crate) fn from_repaired(mat: CMat<T>) -> Self {
        Density { mat }
    }

    /// Pure state `|n><n|`.
    pub fn basis(d: usize, n: usize) -> Result<Self> {
        if n >= d {
            return Err(Error::Config(format!(
                "basis index {n} out of range for dimension {d}"
            )));
        }
        Ok(Density {
            mat: crate::mat::basis_mat(d, n, n),
        })
    }

    /// Uniform-superposition pure state for d = 2.
    pub fn plus() -> Result<Self> {
        let h = cr(T::lit(0.5));
        let mat = CMat::from_shape_fn((2, 2), |_| h);
        Ok(Density { mat })
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        let mut mat = CMat::<T>::zeros((d, d));
        let f = cr(T::one() / T::from_usize(d).unwrap());
        for i in 0..d {
            mat[[i, i]] = f;
        }
        Ok(Density { mat })
    }

    /// Pure state from a (not necessarily normalized) ket.
    pub fn from_ket(ket: &CVec<T>) -> Result<Self> {
        let norm_sq = ket.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if norm_sq <= T::epsilon() {
            return Err(Error::Config("ket has vanishing norm".into()));
        }
        let d = ket.len();
        let mut mat = CMat::<T>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                mat[[i, j]] = ket[i] * ket[j].conj() / cr(norm_sq);
            }
        }
        Ok(Density { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn into_mat(self) -> CMat<T> {
        self.mat
    }

    /// Column-stacked form.
    pub fn vectorized(&self) -> CVec<T> {
        crate::linalg::vectorize(&self.mat).expect("density matrices are square")
    }
}

/// Serialization form: nested rows of `[re, im]` pairs.
pub fn mat_to_pairs(m: &CMat<f64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[[i, j]].re, m[[i, j]].im]).collect())
        .collect()
}

pub fn mat_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMat<f64>> {
    let r = rows.len();
    if r == 0 {
        return Err(Error::ModelFormat("empty matrix".into()));
    }
    let c = rows[0].len();
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::ModelFormat("ragged matrix rows".into()));
    }
    let mut m = CMat::<f64>::zeros((r, c));
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[[i, j]] = Complex::new(re, im);
        }
    }
    Ok(m)
}

/// JSON-friendly wrapper used in reports and path records.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixPairs(pub Vec<Vec<[f64; 2]>>);

impl From<&CMat<f64>> for MatrixPairs {
    fn from(m: &CMat<f64>) -> Self {
        MatrixPairs(mat_to_pairs(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use ndarray::array;

    #[test]
    fn accepts_valid_state_rejects_invalid() {
        let tol = Tolerances::default();
        let ok = array![[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(Density::new(ok, &tol).is_ok());

        let bad_trace = array![[c(0.9, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!(Density::new(bad_trace, &tol).is_err());

        let not_hermitian = array![[c(0.5, 0.0), c(0.3, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(Density::new(not_hermitian, &tol).is_err());

        let negative = array![[c(1.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.5, 0.0)]];
        assert!(Density::new(negative, &tol).is_err());
    }

    #[test]
    fn plus_state_is_projector() {
        let p = Density::<f64>::plus().unwrap();
        let sq = p.mat().dot(p.mat());
        assert!(crate::mat::max_abs_diff(&sq, p.mat()) < 1e-15);
    }

    #[test]
    fn pairs_round_trip() {
        let m = array![[c(1.0, -2.0), c(0.0, 0.5)], [c(0.25, 0.0), c(0.0, 0.0)]];
        let back = mat_from_pairs(&mat_to_pairs(&m)).unwrap();
        assert_eq!(m, back);
    }
}
