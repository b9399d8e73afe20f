//! Coefficient traits shared by the exact and floating series kernels.

use std::fmt;
use std::ops::Neg;

use num_rational::BigRational;
use num_traits::{Num, NumAssignRef, ToPrimitive};

/// Field element usable as a power-series coefficient.
pub trait Coefficient:
    Num + NumAssignRef + Neg<Output = Self> + Clone + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn mul_ref(&self, other: &Self) -> Self;
    fn from_rational(r: &BigRational) -> Self;
}

impl Coefficient for BigRational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Coefficient for f64 {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Coefficient for f32 {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
}

/// Complex number type for numeric series evaluation.
///
/// `precision` is the working precision in bits; every value derived from an
/// operand inherits its precision.
pub trait ComplexScalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn precision(&self) -> u32;
    /// Same value re-rounded to `prec` bits (no-op for fixed-precision types).
    fn with_precision(&self, prec: u32) -> Self;
    fn from_rational_like(r: &BigRational, like: &Self) -> Self;
    fn from_i64_like(k: i64, like: &Self) -> Self;
    fn from_c64_like(z: num_complex::Complex64, like: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// `log2 |self|`, `-inf` for zero.
    fn abs_log2(&self) -> f64;
    fn to_c64(&self) -> num_complex::Complex64;

    fn one_like(like: &Self) -> Self {
        Self::from_i64_like(1, like)
    }
    fn zero_like(like: &Self) -> Self {
        Self::from_i64_like(0, like)
    }
    fn powi(&self, k: i64) -> Self {
        let mut base = if k < 0 { Self::one_like(self).div(self) } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one_like(self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl ComplexScalar for num_complex::Complex64 {
    fn precision(&self) -> u32 {
        53
    }
    fn with_precision(&self, _prec: u32) -> Self {
        *self
    }
    fn from_rational_like(r: &BigRational, _like: &Self) -> Self {
        num_complex::Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_i64_like(k: i64, _like: &Self) -> Self {
        num_complex::Complex64::new(k as f64, 0.0)
    }
    fn from_c64_like(z: num_complex::Complex64, _like: &Self) -> Self {
        z
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        num_complex::Complex64::conj(self)
    }
    fn abs_log2(&self) -> f64 {
        self.norm().log2()
    }
    fn to_c64(&self) -> num_complex::Complex64 {
        *self
    }
}
