//! General complex eigendecomposition for small dense matrices.
//!
//! Pipeline: unitary Hessenberg reduction, explicitly shifted QR iteration
//! with Wilkinson shifts to Schur form, eigenvectors of the triangular
//! factor by back-substitution. The result is self-checked against the
//! reconstruction residual, and an eigenvector-matrix condition number
//! above the configured bound is reported as near-defective so callers can
//! fall back to quadrature routes.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::lu;
use crate::mat::{fro_norm, identity, max_abs, one_norm, vec_norm, CMat, CVec};
use crate::scalar::{cr, Scalar};
use crate::tol::Tolerances;

/// `A = S diag(values) S^{-1}`.
pub struct EigDecomposition<T: Scalar> {
    pub values: CVec<T>,
    /// Right eigenvectors as columns.
    pub vectors: CMat<T>,
    pub inverse: CMat<T>,
    /// 1-norm condition estimate of the eigenvector matrix.
    pub condition: T,
}

impl<T: Scalar> EigDecomposition<T> {
    /// `S diag(f(lambda)) S^{-1}`.
    pub fn apply_function(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> CMat<T> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[[i, j]] *= fj;
            }
        }
        scaled.dot(&self.inverse)
    }
}

/// Eigendecomposition with residual and conditioning checks.
pub fn eig<T: Scalar>(a: &CMat<T>, tol: &Tolerances) -> Result<EigDecomposition<T>> {
    let (n, m) = a.dim();
    if n != m {
        return Err(Error::NonSquare { rows: n, cols: m });
    }
    if !crate::mat::all_finite(a) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(EigDecomposition {
            values: CVec::zeros(0),
            vectors: CMat::zeros((0, 0)),
            inverse: CMat::zeros((0, 0)),
            condition: T::one(),
        });
    }

    let (t, z) = schur(a)?;
    let values: CVec<T> = CVec::from_iter((0..n).map(|i| t[[i, i]]));
    let y = triangular_eigenvectors(&t);
    let mut vectors = z.dot(&y);
    // Normalize columns.
    for j in 0..n {
        let norm = vec_norm(&vectors.column(j).to_owned());
        if norm > T::zero() {
            let inv = cr(T::one() / norm);
            for i in 0..n {
                vectors[[i, j]] *= inv;
            }
        }
    }

    let inverse = match lu::inverse(&vectors) {
        Ok(inv) => inv,
        Err(Error::Singular { pivot }) => {
            return Err(Error::NearDefective {
                condition: 1.0 / pivot.max(f64::MIN_POSITIVE),
            })
        }
        Err(e) => return Err(e),
    };
    let condition = one_norm(&vectors) * one_norm(&inverse);
    if condition.to_f64_lossy() > tol.eig_condition_max {
        return Err(Error::NearDefective {
            condition: condition.to_f64_lossy(),
        });
    }

    // Reconstruction residual is the acceptance oracle for this routine.
    let decomp = EigDecomposition {
        values,
        vectors,
        inverse,
        condition,
    };
    let rebuilt = decomp.apply_function(|lam| lam);
    let scale = fro_norm(a).max(T::epsilon());
    let residual = fro_norm(&(&rebuilt - a)) / scale;
    if residual.to_f64_lossy() > tol.eig_residual {
        return Err(Error::NearDefective {
            condition: decomp.condition.to_f64_lossy(),
        });
    }
    Ok(decomp)
}

/// Unitary similarity to upper triangular form: `A = Z T Z*`.
pub fn schur<T: Scalar>(a: &CMat<T>) -> Result<(CMat<T>, CMat<T>)> {
    let n = a.nrows();
    let (mut h, mut z) = hessenberg(a);
    if n <= 1 {
        return Ok((h, z));
    }

    let scale = max_abs(&h).max(T::epsilon());
    let small = scale * T::epsilon();
    let max_iterations = 60 * n;
    let mut iterations = 0usize;
    let mut hi = n - 1;
    let mut stuck = 0usize;

    while hi > 0 {
        // Deflate converged subdiagonal entries from the bottom.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[[lo, lo - 1]].norm();
            let local = h[[lo - 1, lo - 1]].norm() + h[[lo, lo]].norm();
            let threshold = if local > T::zero() {
                local * T::epsilon()
            } else {
                small
            };
            if sub <= threshold {
                h[[lo, lo - 1]] = Complex::new(T::zero(), T::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stuck = 0;
            continue;
        }

        iterations += 1;
        stuck += 1;
        if iterations > max_iterations {
            return Err(Error::EigenConvergence {
                iterations: max_iterations,
            });
        }

        let shift = if stuck % 12 == 0 {
            // Exceptional shift to break symmetric stalls.
            h[[hi, hi]] + cr(h[[hi, hi - 1]].norm() * T::lit(0.75))
        } else {
            wilkinson_shift(&h, hi)
        };

        qr_step(&mut h, &mut z, lo, hi, shift);
    }

    // Clean the strictly lower triangle of rounding dust.
    for i in 1..n {
        for j in 0..i {
            h[[i, j]] = Complex::new(T::zero(), T::zero());
        }
    }
    Ok((h, z))
}

/// Householder reduction to upper Hessenberg form; returns (H, Q) with
/// `A = Q H Q*`.
fn hessenberg<T: Scalar>(a: &CMat<T>) -> (CMat<T>, CMat<T>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = identity::<T>(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        // Householder vector for column k below the diagonal.
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[[i, k]]).collect();
        let xnorm = v
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt();
        if xnorm <= T::epsilon() * max_abs(&h) {
            continue;
        }
        let phase = if v[0].norm() > T::zero() {
            v[0] / cr(v[0].norm())
        } else {
            cr(T::one())
        };
        let alpha = -phase * cr(xnorm);
        v[0] -= alpha;
        let vnorm = v
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt();
        if vnorm <= T::zero() {
            continue;
        }
        let inv = cr(T::one() / vnorm);
        for e in v.iter_mut() {
            *e *= inv;
        }
        let two = cr(T::lit(2.0));

        // H <- P H with P = I - 2 v v* acting on rows k+1..n.
        for j in k..n {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[[i, j]];
            }
            let f = two * dot;
            for (idx, i) in (k + 1..n).enumerate() {
                let sub = f * v[idx];
                h[[i, j]] -= sub;
            }
        }
        // H <- H P on columns k+1..n.
        for i in 0..n {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (idx, j) in (k + 1..n).enumerate() {
                dot += h[[i, j]] * v[idx];
            }
            let f = two * dot;
            for (idx, j) in (k + 1..n).enumerate() {
                let sub = f * v[idx].conj();
                h[[i, j]] -= sub;
            }
        }
        // Q <- Q P.
        for i in 0..n {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (idx, j) in (k + 1..n).enumerate() {
                dot += q[[i, j]] * v[idx];
            }
            let f = two * dot;
            for (idx, j) in (k + 1..n).enumerate() {
                let sub = f * v[idx].conj();
                q[[i, j]] -= sub;
            }
        }
        // Exact zeros below the subdiagonal of column k.
        h[[k + 1, k]] = alpha;
        for i in k + 2..n {
            h[[i, k]] = Complex::new(T::zero(), T::zero());
        }
    }
    (h, q)
}

/// Eigenvalue of the trailing 2x2 block closest to the corner entry.
fn wilkinson_shift<T: Scalar>(h: &CMat<T>, hi: usize) -> Complex<T> {
    let a = h[[hi - 1, hi - 1]];
    let b = h[[hi - 1, hi]];
    let c = h[[hi, hi - 1]];
    let d = h[[hi, hi]];
    let half = cr(T::lit(0.5));
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let rad = (diff * diff + b * c).sqrt();
    let lam1 = mean + rad;
    let lam2 = mean - rad;
    if (lam1 - d).norm() <= (lam2 - d).norm() {
        lam1
    } else {
        lam2
    }
}

/// One explicit shifted QR step on the active window `lo..=hi`.
fn qr_step<T: Scalar>(h: &mut CMat<T>, z: &mut CMat<T>, lo: usize, hi: usize, shift: Complex<T>) {
    let n = h.nrows();
    for i in lo..=hi {
        h[[i, i]] -= shift;
    }

    // Left rotations: R = G_{hi-1} ... G_lo (H - mu I).
    let mut rotations: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[[k, k]], h[[k + 1, k]]);
        for j in k..n {
            let hk = h[[k, j]];
            let hk1 = h[[k + 1, j]];
            h[[k, j]] = cr(c) * hk + s * hk1;
            h[[k + 1, j]] = -s.conj() * hk + cr(c) * hk1;
        }
        h[[k + 1, k]] = Complex::new(T::zero(), T::zero());
        rotations.push((c, s));
    }

    // Right rotations: H <- R G_lo* ... G_{hi-1}*, Z <- Z G_k*.
    for (offset, (c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let top = (k + 2).min(hi) + 1;
        for i in 0..top {
            let hik = h[[i, k]];
            let hik1 = h[[i, k + 1]];
            h[[i, k]] = hik * cr(*c) + hik1 * s.conj();
            h[[i, k + 1]] = -hik * *s + hik1 * cr(*c);
        }
        for i in 0..n {
            let zik = z[[i, k]];
            let zik1 = z[[i, k + 1]];
            z[[i, k]] = zik * cr(*c) + zik1 * s.conj();
            z[[i, k + 1]] = -zik * *s + zik1 * cr(*c);
        }
    }

    for i in lo..=hi {
        h[[i, i]] += shift;
    }
}

/// Rotation `[c s; -conj(s) c]` with real `c` mapping `(f, g)` to `(r, 0)`.
fn givens<T: Scalar>(f: Complex<T>, g: Complex<T>) -> (T, Complex<T>) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    if fn_ == T::zero() {
        return (T::zero(), g.conj() / cr(gn));
    }
    let denom = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / denom;
    let s = (f / cr(fn_)) * g.conj() / cr(denom);
    (c, s)
}

/// Right eigenvectors of an upper triangular matrix, one column per
/// diagonal entry, by back-substitution with LAPACK-style small-pivot
/// perturbation.
fn triangular_eigenvectors<T: Scalar>(t: &CMat<T>) -> CMat<T> {
    let n = t.nrows();
    let mut y = CMat::<T>::zeros((n, n));
    let scale = max_abs(t).max(T::epsilon());
    let smin = scale * T::epsilon();
    for k in 0..n {
        let lam = t[[k, k]];
        y[[k, k]] = cr(T::one());
        for i in (0..k).rev() {
            let mut rhs = Complex::new(T::zero(), T::zero());
            for j in (i + 1)..=k {
                rhs += t[[i, j]] * y[[j, k]];
            }
            let mut denom = lam - t[[i, i]];
            if denom.norm() < smin {
                denom = cr(smin);
            }
            y[[i, k]] = rhs / denom;
        }
    }
    y
}

/// Convenience: eigenvalues only.
pub fn eigenvalues<T: Scalar>(a: &CMat<T>) -> Result<CVec<T>> {
    let (t, _) = schur(a)?;
    Ok(CVec::from_iter((0..a.nrows()).map(|i| t[[i, i]])))
}
