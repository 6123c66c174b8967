//! LU factorization with partial pivoting for dense complex matrices.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mat::{CMat, CVec};
use crate::scalar::Scalar;

/// Factored form of a square matrix.
pub struct Lu<T: Scalar> {
    lu: CMat<T>,
    pivots: Vec<usize>,
}

pub fn factor<T: Scalar>(a: &CMat<T>) -> Result<Lu<T>> {
    let (n, m) = a.dim();
    if n != m {
        return Err(Error::NonSquare { rows: n, cols: m });
    }
    let mut lu = a.clone();
    let mut pivots = vec![0usize; n];
    let scale = crate::mat::max_abs(&lu).max(T::one());
    let tiny = scale * T::epsilon() * T::lit(1e-2);

    for k in 0..n {
        // pivot search
        let mut p = k;
        let mut best = lu[[k, k]].norm();
        for i in (k + 1)..n {
            let v = lu[[i, k]].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= tiny {
            return Err(Error::Singular {
                pivot: best.to_f64_lossy(),
            });
        }
        pivots[k] = p;
        if p != k {
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[p, j]];
                lu[[p, j]] = tmp;
            }
        }
        let inv_pivot = Complex::new(T::one(), T::zero()) / lu[[k, k]];
        for i in (k + 1)..n {
            let factor = lu[[i, k]] * inv_pivot;
            lu[[i, k]] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[[k, j]];
                lu[[i, j]] -= sub;
            }
        }
    }
    Ok(Lu { lu, pivots })
}

impl<T: Scalar> Lu<T> {
    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    pub fn solve_vec(&self, b: &CVec<T>) -> CVec<T> {
        let n = self.dim();
        debug_assert_eq!(b.len(), n);
        let mut x = b.clone();
        // The factorization swaps full rows, so all interchanges apply to
        // the right-hand side before the triangular solves.
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
        }
        for k in 0..n {
            let xk = x[k];
            for i in (k + 1)..n {
                let sub = self.lu[[i, k]] * xk;
                x[i] -= sub;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in (k + 1)..n {
                acc -= self.lu[[k, j]] * x[j];
            }
            x[k] = acc / self.lu[[k, k]];
        }
        x
    }

    /// Solve `A X = B` column by column.
    pub fn solve_mat(&self, b: &CMat<T>) -> CMat<T> {
        let n = self.dim();
        let cols = b.ncols();
        let mut x = CMat::<T>::zeros((n, cols));
        for j in 0..cols {
            let col = b.column(j).to_owned();
            let sol = self.solve_vec(&col);
            x.column_mut(j).assign(&sol);
        }
        x
    }
}

/// Inverse through LU.
pub fn inverse<T: Scalar>(a: &CMat<T>) -> Result<CMat<T>> {
    let f = factor(a)?;
    Ok(f.solve_mat(&crate::mat::identity(a.nrows())))
}

/// Solve `A X = B`.
pub fn solve<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>> {
    Ok(factor(a)?.solve_mat(b))
}
