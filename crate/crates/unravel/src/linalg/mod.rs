//! Dense complex linear algebra on small matrices: vectorization, matrix
//! exponentials, eigendecompositions, norms, and density-matrix repair.
//!
//! Vectorization is column-stacking throughout the crate: `vectorize` reads
//! the input column by column, so `[[a, b], [c, d]]` becomes `(a, c, b, d)`,
//! and every superoperator matrix follows this convention.

mod eig;
mod expm;
mod hermitian;
pub mod lu;

pub use eig::{eig, eigenvalues, schur, EigDecomposition};
pub use expm::{expm, matrix_exp};
pub use hermitian::{eigh, min_eigenvalue};

use crate::density::Density;
use crate::error::{Error, Result};
use crate::mat::{dagger, hermitize, CMat, CVec};
use crate::scalar::{cr, Scalar};
use crate::tol::Tolerances;

/// Column-stack a square matrix into a vector of length `d^2`.
pub fn vectorize<T: Scalar>(m: &CMat<T>) -> Result<CVec<T>> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::NonSquare { rows: r, cols: c });
    }
    let mut v = CVec::<T>::zeros(r * c);
    let mut idx = 0;
    for j in 0..c {
        for i in 0..r {
            v[idx] = m[[i, j]];
            idx += 1;
        }
    }
    Ok(v)
}

/// Inverse of [`vectorize`] for a `d^2` vector.
pub fn devectorize<T: Scalar>(v: &CVec<T>) -> Result<CMat<T>> {
    let len = v.len();
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len {
        return Err(Error::DimensionMismatch { left: len, right: d * d });
    }
    let mut m = CMat::<T>::zeros((d, d));
    let mut idx = 0;
    for j in 0..d {
        for i in 0..d {
            m[[i, j]] = v[idx];
            idx += 1;
        }
    }
    Ok(m)
}

/// Trace of a column-stacked square matrix, read off without reshaping.
pub fn trace_of_vectorized<T: Scalar>(v: &CVec<T>) -> num_complex::Complex<T> {
    let d = (v.len() as f64).sqrt().round() as usize;
    let mut t = num_complex::Complex::new(T::zero(), T::zero());
    for i in 0..d {
        t += v[i * d + i];
    }
    t
}

/// Trace distance `1/2 sum |eig(rho - sigma)|`, in [0, 1] for density
/// matrices.
pub fn trace_distance<T: Scalar>(rho: &Density<T>, sigma: &Density<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    Ok(trace_distance_mats(rho.mat(), sigma.mat()))
}

/// Trace distance between two Hermitian matrices given directly.
pub fn trace_distance_mats<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> T {
    let diff = a - b;
    let (evals, _) = eigh(&diff);
    let total = evals.iter().fold(T::zero(), |acc, e| acc + e.abs());
    total * T::lit(0.5)
}

/// Repair an approximate state: hermitize, clip negative eigenvalues to
/// zero, renormalize the trace to one. Idempotent on valid density
/// matrices.
pub fn project_density<T: Scalar>(m: &CMat<T>, tol: &Tolerances) -> Result<Density<T>> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::NonSquare { rows: r, cols: c });
    }
    let h = hermitize(m);
    let (evals, v) = eigh(&h);
    let clipped: Vec<T> = evals.iter().map(|&e| e.max(T::zero())).collect();
    let total = clipped.iter().fold(T::zero(), |acc, &e| acc + e);
    if total.to_f64_lossy() <= tol.degenerate_trace {
        return Err(Error::DegenerateState {
            trace: total.to_f64_lossy(),
        });
    }
    let d = r;
    let mut scaled = v.clone();
    for j in 0..d {
        let f = cr(clipped[j] / total);
        for i in 0..d {
            scaled[[i, j]] *= f;
        }
    }
    let repaired = scaled.dot(&dagger(&v));
    // By construction the result is Hermitian, PSD, and unit trace up to
    // rounding; construct without re-validating eigenvalues.
    Ok(Density::from_repaired(repaired))
}
