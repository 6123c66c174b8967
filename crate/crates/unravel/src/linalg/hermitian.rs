//! Eigendecomposition of Hermitian matrices by cyclic complex Jacobi
//! rotations.
//!
//! Each sweep exactly diagonalizes one 2x2 principal block at a time, which
//! keeps the iteration unconditionally stable for the small matrices this
//! crate works with (states up to d ~ 32, Choi matrices up to d^2).

use num_complex::Complex;

use crate::mat::{identity, CMat};
use crate::scalar::{cr, Scalar};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and a unitary matrix of eigenvectors (columns,
/// matching the eigenvalue order) of the Hermitian part of `h`.
///
/// The input is hermitized first, so callers may pass matrices carrying
/// rounding-level asymmetry.
pub fn eigh<T: Scalar>(h: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "eigh requires a square matrix");
    let mut a = crate::mat::hermitize(h);
    let mut v = identity::<T>(n);
    if n <= 1 {
        let evals = (0..n).map(|i| a[[i, i]].re).collect();
        return (evals, v);
    }

    let off = |a: &CMat<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + a[[i, j]].norm_sqr();
            }
        }
        s.sqrt()
    };
    let scale = crate::mat::fro_norm(&a).max(T::epsilon());
    let target = scale * T::epsilon() * T::lit(4.0);

    for _ in 0..MAX_SWEEPS {
        if off(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[[p, q]];
                if b.norm() <= scale * T::epsilon() * T::lit(0.25) {
                    a[[p, q]] = Complex::new(T::zero(), T::zero());
                    a[[q, p]] = Complex::new(T::zero(), T::zero());
                    continue;
                }
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                // Exact eigen decomposition of [[app, b], [conj(b), aqq]].
                let half = T::lit(0.5);
                let mean = (app + aqq) * half;
                let diff = (app - aqq) * half;
                let rad = (diff * diff + b.norm_sqr()).sqrt();
                // Pick the eigenvalue farther from app so that (lambda - app)
                // is computed without cancellation.
                let (lam_far, lam_near) = if diff >= T::zero() {
                    (mean - rad, mean + rad)
                } else {
                    (mean + rad, mean - rad)
                };
                // Eigenvector for lam_far: (b, lam_far - app), exact.
                let u0 = b;
                let u1 = cr(lam_far - app);
                let norm = (u0.norm_sqr() + u1.norm_sqr()).sqrt();
                let (u0, u1) = (u0 / cr(norm), u1 / cr(norm));
                // Orthogonal partner, eigenvector for lam_near.
                let w0 = -u1.conj();
                let w1 = u0.conj();

                // Columns of the 2x2 unitary: [w u] so that the diagonal
                // order (p -> lam_near, q -> lam_far) keeps sweeps symmetric.
                let (c_pp, c_pq) = (w0, u0);
                let (c_qp, c_qq) = (w1, u1);

                // A <- U* A U on rows/cols p, q.
                for j in 0..n {
                    let ap = a[[p, j]];
                    let aq = a[[q, j]];
                    a[[p, j]] = c_pp.conj() * ap + c_qp.conj() * aq;
                    a[[q, j]] = c_pq.conj() * ap + c_qq.conj() * aq;
                }
                for i in 0..n {
                    let ap = a[[i, p]];
                    let aq = a[[i, q]];
                    a[[i, p]] = ap * c_pp + aq * c_qp;
                    a[[i, q]] = ap * c_pq + aq * c_qq;
                }
                a[[p, q]] = Complex::new(T::zero(), T::zero());
                a[[q, p]] = Complex::new(T::zero(), T::zero());
                a[[p, p]] = cr(lam_near);
                a[[q, q]] = cr(lam_far);

                for i in 0..n {
                    let vp = v[[i, p]];
                    let vq = v[[i, q]];
                    v[[i, p]] = vp * c_pp + vq * c_qp;
                    v[[i, q]] = vp * c_pq + vq * c_qq;
                }
            }
        }
    }

    // Sort ascending.
    let mut order: Vec<usize> = (0..n).collect();
    let evals_raw: Vec<T> = (0..n).map(|i| a[[i, i]].re).collect();
    order.sort_by(|&i, &j| evals_raw[i].partial_cmp(&evals_raw[j]).unwrap());
    let evals: Vec<T> = order.iter().map(|&i| evals_raw[i]).collect();
    let mut vs = CMat::<T>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vs.column_mut(dst).assign(&v.column(src));
    }
    (evals, vs)
}

/// Smallest eigenvalue of the Hermitian part of `h`.
pub fn min_eigenvalue<T: Scalar>(h: &CMat<T>) -> T {
    let (evals, _) = eigh(h);
    evals.first().copied().unwrap_or(T::zero())
}
