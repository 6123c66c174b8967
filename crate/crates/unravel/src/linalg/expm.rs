//! Matrix exponential by scaling and squaring with diagonal Pade
//! approximants (orders 3/5/7/9/13), after Higham's 2005 algorithm.
//!
//! No eigendecomposition is involved, so the routine is insensitive to
//! defective input.

use crate::error::{Error, Result};
use crate::linalg::lu;
use crate::mat::{all_finite, identity, one_norm, CMat};
use crate::scalar::{cr, Scalar};

// 1-norm thresholds for each Pade order (double precision).
const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068e0;
const THETA_13: f64 = 5.371_920_351_148_152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE_9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest number of squarings before the scaled norm is declared
/// unreasonable.
const MAX_SQUARINGS: u32 = 64;

/// `e^A` for a square complex matrix.
pub fn expm<T: Scalar>(a: &CMat<T>) -> Result<CMat<T>> {
    let (n, m) = a.dim();
    if n != m {
        return Err(Error::NonSquare { rows: n, cols: m });
    }
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    let norm = one_norm(a).to_f64_lossy();

    let result = if norm <= THETA_3 {
        pade(a, &PADE_3)?
    } else if norm <= THETA_5 {
        pade(a, &PADE_5)?
    } else if norm <= THETA_7 {
        pade(a, &PADE_7)?
    } else if norm <= THETA_9 {
        pade(a, &PADE_9)?
    } else {
        let mut s = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil() as u32
        } else {
            0
        };
        if s > MAX_SQUARINGS {
            return Err(Error::ExpOverflow { norm });
        }
        let scale = cr(T::lit(0.5).powi(s as i32));
        let scaled = a.mapv(|z| z * scale);
        let mut r = pade(&scaled, &PADE_13)?;
        while s > 0 {
            r = r.dot(&r);
            s -= 1;
        }
        r
    };

    if !all_finite(&result) {
        return Err(Error::ExpOverflow { norm });
    }
    Ok(result)
}

/// `e^{tA}`.
pub fn matrix_exp<T: Scalar>(a: &CMat<T>, t: T) -> Result<CMat<T>> {
    let scaled = a.mapv(|z| z * cr(t));
    expm(&scaled)
}

/// Diagonal Pade approximant with the given coefficient table.
fn pade<T: Scalar>(a: &CMat<T>, coeff: &[f64]) -> Result<CMat<T>> {
    let n = a.nrows();
    let a2 = a.dot(a);

    // Even polynomial V = sum b_{2k} A^{2k}, odd polynomial U = A sum
    // b_{2k+1} A^{2k}; both built by Horner in A^2.
    let half_terms = coeff.len() / 2;
    let mut even = scaled_identity::<T>(n, coeff[2 * (half_terms - 1)]);
    let mut odd = scaled_identity::<T>(n, coeff[2 * (half_terms - 1) + 1]);
    for k in (0..half_terms - 1).rev() {
        even = a2.dot(&even);
        add_scaled_identity(&mut even, coeff[2 * k]);
        odd = a2.dot(&odd);
        add_scaled_identity(&mut odd, coeff[2 * k + 1]);
    }
    let u = a.dot(&odd);

    // (V - U) X = (V + U)
    let p = &even + &u;
    let q = &even - &u;
    lu::solve(&q, &p)
}

fn scaled_identity<T: Scalar>(n: usize, x: f64) -> CMat<T> {
    let mut m = identity::<T>(n);
    let f = cr(T::lit(x));
    m.mapv_inplace(|z| z * f);
    m
}

fn add_scaled_identity<T: Scalar>(m: &mut CMat<T>, x: f64) {
    let f = cr(T::lit(x));
    for i in 0..m.nrows() {
        m[[i, i]] += f;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{max_abs_diff, CMat};
    use crate::scalar::c;
    use ndarray::array;

    #[test]
    fn zero_matrix_gives_identity() {
        let a = CMat::<f64>::zeros((3, 3));
        let e = matrix_exp(&a, 2.5).unwrap();
        assert!(max_abs_diff(&e, &identity(3)) == 0.0);
    }

    #[test]
    fn diagonal_case() {
        let a = array![[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-2.0, 0.0)]];
        let e = matrix_exp(&a, 1.0).unwrap();
        assert!((e[[0, 0]].re - (-1.0f64).exp()).abs() < 1e-14);
        assert!((e[[1, 1]].re - (-2.0f64).exp()).abs() < 1e-14);
        assert!(e[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        let e = matrix_exp(&a, 1.0).unwrap();
        let expected = array![[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(max_abs_diff(&e, &expected) < 1e-15);
    }

    #[test]
    fn large_norm_uses_squaring() {
        // exp(t * diag(-1, 1)) for t = 50 stays finite and accurate.
        let a = array![[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let e = matrix_exp(&a, 50.0).unwrap();
        let rel = (e[[1, 1]].re - 50f64.exp()).abs() / 50f64.exp();
        assert!(rel < 1e-10, "relative error {rel}");
    }

    #[test]
    fn extreme_norm_overflows_explicitly() {
        let a = array![[c(1e9, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1e9, 0.0)]];
        assert!(matches!(
            matrix_exp(&a, 1e9),
            Err(Error::ExpOverflow { .. })
        ));
    }

    #[test]
    fn rotation_matches_closed_form() {
        // exp(i t sigma_x) = cos(t) I + i sin(t) sigma_x
        let a = array![[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
        let t = 0.7f64;
        let e = matrix_exp(&a, t).unwrap();
        assert!((e[[0, 0]].re - t.cos()).abs() < 1e-14);
        assert!((e[[0, 1]].im - t.sin()).abs() < 1e-14);
    }
}
