//! Complex numbers as pairs of MPFR floats.

use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use rug::float::Constant;
use rug::{Float, Integer};

use crate::scalar::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

fn to_integer(b: &num_bigint::BigInt) -> Integer {
    Integer::from_str(&b.to_string()).expect("decimal integer")
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> BigComplex {
        BigComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> BigComplex {
        BigComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn real(re: Float) -> BigComplex {
        let p = re.prec();
        BigComplex { re, im: Float::new(p) }
    }

    /// `exp(2 pi i j / n)`; exact for the real roots `+1` and `-1`.
    pub fn root_of_unity(j: u64, n: u64, prec: u32) -> BigComplex {
        let j = j % n;
        if j == 0 {
            return BigComplex::from_f64(1.0, 0.0, prec);
        }
        if 2 * j == n {
            return BigComplex::from_f64(-1.0, 0.0, prec);
        }
        let mut angle = Float::with_val(prec + 16, Constant::Pi);
        angle *= 2 * j;
        angle /= n;
        let (s, c) = angle.sin_cos(Float::new(prec + 16));
        BigComplex { re: Float::with_val(prec, c), im: Float::with_val(prec, s) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn scale(&self, t: &Float) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * t), im: Float::with_val(p, &self.im * t) }
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl ComplexScalar for BigComplex {
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn with_precision(&self, prec: u32) -> Self {
        BigComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }
    fn from_rational_like(r: &BigRational, like: &Self) -> Self {
        let p = like.prec();
        let mut re = Float::with_val(p, to_integer(r.numer()));
        re /= to_integer(r.denom());
        BigComplex { re, im: Float::new(p) }
    }
    fn from_i64_like(k: i64, like: &Self) -> Self {
        let p = like.prec();
        BigComplex { re: Float::with_val(p, k), im: Float::new(p) }
    }
    fn from_c64_like(z: Complex64, like: &Self) -> Self {
        BigComplex::from_f64(z.re, z.im, like.prec())
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        if self.im.is_zero() && o.im.is_zero() {
            return BigComplex { re: Float::with_val(p, &self.re * &o.re), im: Float::new(p) };
        }
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        BigComplex { re: ac - bd, im: ad + bc }
    }
    fn div(&self, o: &Self) -> Self {
        let p = self.prec();
        if o.im.is_zero() {
            return BigComplex { re: Float::with_val(p, &self.re / &o.re), im: Float::with_val(p, &self.im / &o.re) };
        }
        let den = Float::with_val(p, o.re.square_ref()) + Float::with_val(p, o.im.square_ref());
        let re = Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im);
        BigComplex { re: re / &den, im: im / &den }
    }
    fn neg(&self) -> Self {
        BigComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }
    fn abs_log2(&self) -> f64 {
        let e = match (self.re.get_exp(), self.im.get_exp()) {
            (None, None) => return f64::NEG_INFINITY,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.max(b),
        };
        let re = Float::with_val(64, &self.re >> e).to_f64();
        let im = Float::with_val(64, &self.im >> e).to_f64();
        re.hypot(im).log2() + e as f64
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        let z = BigComplex::root_of_unity(1, 6, 200);
        let z6 = z.powi(6);
        let one = BigComplex::one_like(&z);
        assert!(z6.sub(&one).abs_log2() < -190.0);
        assert_eq!(BigComplex::root_of_unity(3, 6, 100).to_c64(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn huge_magnitudes() {
        let mut x = BigComplex::from_f64(0.5, 0.5, 128);
        for _ in 0..12 {
            x = x.mul(&x);
        }
        // |0.5+0.5i| = 2^-1/2, raised to 4096
        assert!((x.abs_log2() + 2048.0).abs() < 1e-9);
        let inv = BigComplex::one_like(&x).div(&x);
        assert!((inv.abs_log2() - 2048.0).abs() < 1e-9);
    }
}
