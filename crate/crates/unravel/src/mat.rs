//! Dense complex matrix helpers shared by every module.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::scalar::{cr, Scalar};

/// Dense complex matrix.
pub type CMat<T> = Array2<Complex<T>>;
/// Dense complex vector.
pub type CVec<T> = Array1<Complex<T>>;

/// `n x n` identity.
pub fn identity<T: Scalar>(n: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = cr(T::one());
    }
    m
}

/// Matrix unit `E_ij` of size `d x d`.
pub fn basis_mat<T: Scalar>(d: usize, i: usize, j: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros((d, d));
    m[[i, j]] = cr(T::one());
    m
}

/// Conjugate transpose.
pub fn dagger<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    let (r, c) = m.dim();
    CMat::from_shape_fn((c, r), |(i, j)| m[[j, i]].conj())
}

/// Hermitian part `(M + M*)/2`.
pub fn hermitize<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    let half = cr(T::lit(0.5));
    let mut h = m + &dagger(m);
    h.mapv_inplace(|z| z * half);
    h
}

pub fn trace<T: Scalar>(m: &CMat<T>) -> Complex<T> {
    m.diag().sum()
}

/// Entrywise conjugate (no transpose).
pub fn conj<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    m.mapv(|z| z.conj())
}

/// Largest entry magnitude.
pub fn max_abs<T: Scalar>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// Largest entrywise difference between two matrices of equal shape.
pub fn max_abs_diff<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> T {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).norm()))
}

/// Induced 1-norm (max column sum).
pub fn one_norm<T: Scalar>(m: &CMat<T>) -> T {
    let mut best = T::zero();
    for col in m.columns() {
        let s = col.iter().fold(T::zero(), |acc, z| acc + z.norm());
        best = best.max(s);
    }
    best
}

/// Frobenius norm.
pub fn fro_norm<T: Scalar>(m: &CMat<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}

pub fn vec_norm<T: Scalar>(v: &CVec<T>) -> T {
    v.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}

pub fn all_finite<T: Scalar>(m: &CMat<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Max-entry hermiticity defect `max |M - M*|`.
pub fn hermiticity_defect<T: Scalar>(m: &CMat<T>) -> T {
    let (r, c) = m.dim();
    if r != c {
        return T::infinity();
    }
    let mut worst = T::zero();
    for i in 0..r {
        for j in i..c {
            let d = (m[[i, j]] - m[[j, i]].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Scale a matrix by a real factor.
pub fn scale<T: Scalar>(m: &CMat<T>, f: T) -> CMat<T> {
    m.mapv(|z| z * cr(f))
}

/// Kronecker product (re-exported from ndarray for a single call site).
pub fn kron<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    ndarray::linalg::kron(&a.view(), &b.view())
}

/// Operator 2-norm, computed as the square root of the largest eigenvalue
/// of `M* M`.
pub fn operator_norm<T: Scalar>(m: &CMat<T>) -> T {
    let gram = dagger(m).dot(m);
    let (evals, _) = crate::linalg::eigh(&gram);
    evals
        .last()
        .copied()
        .unwrap_or(T::zero())
        .max(T::zero())
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn dagger_conjugates_and_transposes() {
        let m = ndarray::array![
            [c(1.0, 2.0), c(0.0, -1.0)],
            [c(3.0, 0.0), c(0.5, 0.5)]
        ];
        let d = dagger(&m);
        assert_eq!(d[[0, 1]], c(3.0, 0.0));
        assert_eq!(d[[1, 0]], c(0.0, 1.0));
        assert_eq!(d[[0, 0]], c(1.0, -2.0));
    }

    #[test]
    fn one_norm_is_max_column_sum() {
        let m: CMat<f64> = ndarray::array![[c(1.0, 0.0), c(0.0, 2.0)], [c(-1.0, 0.0), c(0.0, 0.0)]];
        assert!((one_norm(&m) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let h: CMat<f64> = ndarray::array![[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(2.0, 0.0)]];
        assert!(hermiticity_defect(&h) < 1e-15);
        let m: CMat<f64> = ndarray::array![[c(1.0, 0.0), c(0.2, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!((hermiticity_defect(&m) - 0.2).abs() < 1e-15);
    }
}
