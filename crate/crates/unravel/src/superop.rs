//! Superoperators: `d^2 x d^2` matrices acting on column-stacked operators.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{devectorize, vectorize};
use crate::mat::{conj, dagger, identity, kron, CMat, CVec};
use crate::scalar::{cr, Scalar};

/// Linear map on `d x d` operators in its column-stacking matrix
/// representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp<T: Scalar> {
    dim: usize,
    mat: CMat<T>,
}

impl<T: Scalar> SuperOp<T> {
    pub fn new(dim: usize, mat: CMat<T>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || r != dim * dim {
            return Err(Error::DimensionMismatch {
                left: r,
                right: dim * dim,
            });
        }
        if !crate::mat::all_finite(&mat) {
            return Err(Error::NonFinite);
        }
        Ok(SuperOp { dim, mat })
    }

    pub fn identity(dim: usize) -> Self {
        SuperOp {
            dim,
            mat: identity(dim * dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        SuperOp {
            dim,
            mat: CMat::zeros((dim * dim, dim * dim)),
        }
    }

    /// Map `X -> A X`.
    pub fn left_mult(a: &CMat<T>) -> Self {
        let d = a.nrows();
        SuperOp {
            dim: d,
            mat: kron(&identity(d), a),
        }
    }

    /// Map `X -> X B`.
    pub fn right_mult(b: &CMat<T>) -> Self {
        let d = b.nrows();
        SuperOp {
            dim: d,
            mat: kron(&b.t().to_owned(), &identity(d)),
        }
    }

    /// Map `X -> V X V*`.
    pub fn sandwich(v: &CMat<T>) -> Self {
        let d = v.nrows();
        SuperOp {
            dim: d,
            mat: kron(&conj(v), v),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn apply_vec(&self, v: &CVec<T>) -> CVec<T> {
        self.mat.dot(v)
    }

    pub fn apply(&self, x: &CMat<T>) -> Result<CMat<T>> {
        if x.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                left: x.nrows(),
                right: self.dim,
            });
        }
        devectorize(&self.mat.dot(&vectorize(x)?))
    }

    /// `tr S(X)` without reshaping the result.
    pub fn apply_trace(&self, x: &CMat<T>) -> Result<Complex<T>> {
        let v = self.mat.dot(&vectorize(x)?);
        Ok(crate::linalg::trace_of_vectorized(&v))
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &SuperOp<T>) -> SuperOp<T> {
        debug_assert_eq!(self.dim, other.dim);
        SuperOp {
            dim: self.dim,
            mat: self.mat.dot(&other.mat),
        }
    }

    pub fn add(&self, other: &SuperOp<T>) -> SuperOp<T> {
        debug_assert_eq!(self.dim, other.dim);
        SuperOp {
            dim: self.dim,
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &SuperOp<T>) -> SuperOp<T> {
        debug_assert_eq!(self.dim, other.dim);
        SuperOp {
            dim: self.dim,
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, f: T) -> SuperOp<T> {
        SuperOp {
            dim: self.dim,
            mat: self.mat.mapv(|z| z * cr(f)),
        }
    }

    /// Max-entry deviation from trace preservation, computed exactly from
    /// the row condition `vec(I)^T S = vec(I)^T` (equivalently
    /// `tr S(X) = tr X` for all `X`).
    pub fn trace_preservation_defect(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for col in 0..d * d {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..d {
                acc += self.mat[[i * d + i, col]];
            }
            // vec(I)^T on column `col` should be 1 on diagonal positions of
            // the input index, 0 elsewhere.
            let (cj, ci) = (col / d, col % d);
            if ci == cj {
                acc -= Complex::new(T::one(), T::zero());
            }
            worst = worst.max(acc.norm());
        }
        worst
    }

    /// Max-entry deviation of `tr S(X) = 0` for all `X` (generator
    /// normalization).
    pub fn trace_annihilation_defect(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for col in 0..d * d {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..d {
                acc += self.mat[[i * d + i, col]];
            }
            worst = worst.max(acc.norm());
        }
        worst
    }

    /// Hermiticity preservation: `S(X*)* = S(X)` for all `X`, checked
    /// exactly through the matrix identity it is equivalent to.
    pub fn preserves_hermiticity_defect(&self) -> T {
        // S preserves hermiticity iff conj(S) equals the similarity of S by
        // the swap X -> X* in the vectorized picture, i.e.
        // S[(i,j),(k,l)] = conj(S[(j,i),(l,k)]) with (row, col) block
        // indices of column stacking.
        let d = self.dim;
        let mut worst = T::zero();
        for jr in 0..d {
            for ir in 0..d {
                for jc in 0..d {
                    for ic in 0..d {
                        let a = self.mat[[jr * d + ir, jc * d + ic]];
                        let b = self.mat[[ir * d + jr, ic * d + jc]].conj();
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Choi matrix of a superoperator: the block matrix with block `(i, j)`
/// equal to `S(E_ij)`, i.e. `(S x id)` applied to the unnormalized
/// maximally entangled projector. `S` is completely positive iff the Choi
/// matrix is positive semidefinite.
pub fn choi_matrix<T: Scalar>(s: &SuperOp<T>) -> CMat<T> {
    let d = s.dim();
    let mut c = CMat::<T>::zeros((d * d, d * d));
    for i in 0..d {
        for j in 0..d {
            let block = s
                .apply(&crate::mat::basis_mat(d, i, j))
                .expect("dimensions match by construction");
            for k in 0..d {
                for l in 0..d {
                    c[[i * d + k, j * d + l]] = block[[k, l]];
                }
            }
        }
    }
    c
}

/// Smallest Choi eigenvalue; nonnegative (to tolerance) iff `S` is CP.
pub fn choi_min_eigenvalue<T: Scalar>(s: &SuperOp<T>) -> T {
    crate::linalg::min_eigenvalue(&choi_matrix(s))
}

/// Build the superoperator matrix of `X -> sum_i V_i X V_i*`.
pub fn kraus_channel<T: Scalar>(ops: &[CMat<T>]) -> Result<SuperOp<T>> {
    let d = ops
        .first()
        .map(|v| v.nrows())
        .ok_or(Error::NoJumpOperators)?;
    let mut acc = SuperOp::zero(d);
    for v in ops {
        if v.dim() != (d, d) {
            return Err(Error::DimensionMismatch {
                left: v.nrows(),
                right: d,
            });
        }
        acc = acc.add(&SuperOp::sandwich(v));
    }
    Ok(acc)
}

/// `X -> A X + X A*` helper used by generator assembly.
pub fn anticommutator_like<T: Scalar>(a: &CMat<T>) -> SuperOp<T> {
    SuperOp::left_mult(a).add(&SuperOp::right_mult(&dagger(a)))
}
