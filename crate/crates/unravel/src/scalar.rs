//! Real scalar abstraction underlying all complex matrices in this crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating-point scalar: `f32` or `f64`.
///
/// All numerics are generic over this trait; the crate root exposes the
/// `f64` aliases used by the shipped tools. Tolerance constants are written
/// as `f64` literals and converted through [`Scalar::lit`], so the `f32`
/// instantiation is only meaningful where the stated tolerances are
/// representable.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` literal (tolerance, coefficient) into `Self`.
    fn lit(x: f64) -> Self;

    /// One standard normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One uniform draw from the open interval (0, 1).
    fn unit_open<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn lit(x: f64) -> Self {
        x
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_open<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Open01.sample(rng)
    }
}

impl Scalar for f32 {
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_open<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Open01.sample(rng)
    }
}

/// Complex number from a real part.
#[inline]
pub fn cr<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Complex number from real and imaginary parts.
#[inline]
pub fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// The imaginary unit.
#[inline]
pub fn ci<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}
