//! Truncated Laurent series in `q`.
//!
//! A series stores coefficients for exponents `min_exp .. trunc`; everything at or
//! above `trunc` is unknown. Arithmetic propagates the truncation so that every
//! stored coefficient is exact:
//!
//! - `a + b` is valid below `min(a.trunc, b.trunc)`
//! - `a * b` is valid below `min(a.trunc + val(b), b.trunc + val(a))`
//! - `1 / a` is valid below `a.trunc - 2 val(a)`
//!
//! Non-zero series are kept normalized (`coeffs[0] != 0`); the zero series with
//! truncation `t` is stored as a single zero at `t - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

pub type Rational = BigRational;

/// Largest |exponent| a series may carry.
pub const MAX_ORDER: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
    pub fn pow(self, k: i64) -> Sign {
        if k.rem_euclid(2) == 1 {
            self
        } else {
            Sign::Plus
        }
    }
}

/// `sign * scalar * q^exponent` with `scalar > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    sign: Sign,
    scalar: Rational,
    exponent: i64,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Monomial {
    /// Panics if `scalar` is zero; a zero monomial is never a valid parameter.
    pub fn new(sign: Sign, scalar: Rational, exponent: i64) -> Monomial {
        assert!(!scalar.is_zero(), "monomial scalar must be nonzero");
        let (sign, scalar) = if scalar.is_negative() { (sign.flip(), -scalar) } else { (sign, scalar) };
        Monomial { sign, scalar, exponent }
    }
    pub fn one() -> Monomial {
        Monomial::q_pow(0)
    }
    pub fn q_pow(e: i64) -> Monomial {
        Monomial { sign: Sign::Plus, scalar: Rational::one(), exponent: e }
    }
    /// `-q^e`.
    pub fn neg_q_pow(e: i64) -> Monomial {
        Monomial { sign: Sign::Minus, scalar: Rational::one(), exponent: e }
    }
    pub fn constant(c: Rational) -> Monomial {
        Monomial::new(Sign::Plus, c, 0)
    }
    pub fn int(c: i64) -> Monomial {
        Monomial::constant(rat(c, 1))
    }
    pub fn sign(&self) -> Sign {
        self.sign
    }
    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }
    pub fn exponent(&self) -> i64 {
        self.exponent
    }
    /// Signed coefficient `sign * scalar`.
    pub fn coeff(&self) -> Rational {
        match self.sign {
            Sign::Plus => self.scalar.clone(),
            Sign::Minus => -self.scalar.clone(),
        }
    }
    pub fn is_unit_scalar(&self) -> bool {
        self.scalar.is_one()
    }
    pub fn negate(&self) -> Monomial {
        Monomial { sign: self.sign.flip(), ..self.clone() }
    }
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            sign: self.sign.times(other.sign),
            scalar: &self.scalar * &other.scalar,
            exponent: self.exponent + other.exponent,
        }
    }
    pub fn over(&self, other: &Monomial) -> Monomial {
        self.times(&other.inv())
    }
    pub fn inv(&self) -> Monomial {
        Monomial { sign: self.sign, scalar: self.scalar.recip(), exponent: -self.exponent }
    }
    pub fn shift(&self, e: i64) -> Monomial {
        Monomial { exponent: self.exponent + e, ..self.clone() }
    }
    pub fn scale(&self, c: &Rational) -> Monomial {
        Monomial::new(self.sign, &self.scalar * c, self.exponent)
    }
    pub fn pow(&self, k: i64) -> Monomial {
        let scalar = if k >= 0 {
            num_traits::pow(self.scalar.clone(), k as usize)
        } else {
            num_traits::pow(self.scalar.recip(), (-k) as usize)
        };
        Monomial { sign: self.sign.pow(k), scalar, exponent: self.exponent * k }
    }
    /// Image under `q -> q^m`.
    pub fn subst(&self, m: i64) -> Monomial {
        Monomial { exponent: self.exponent * m, ..self.clone() }
    }
    /// True when the monomial is exactly `q^e` for some `e` divisible by `m`.
    pub fn on_lattice(&self, m: i64) -> bool {
        self.sign == Sign::Plus && self.scalar.is_one() && self.exponent.rem_euclid(m) == 0
    }
    /// Square root in `Q(q^{1/2})` restricted to monomials: `None` unless the sign is `+`,
    /// the scalar is a rational square and the exponent is even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.sign == Sign::Minus || self.exponent % 2 != 0 {
            return None;
        }
        let n = self.scalar.numer().sqrt();
        let d = self.scalar.denom().sqrt();
        if &(&n * &n) == self.scalar.numer() && &(&d * &d) == self.scalar.denom() {
            Some(Monomial { sign: Sign::Plus, scalar: Rational::new(n, d), exponent: self.exponent / 2 })
        } else {
            None
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Minus {
            write!(f, "-")?;
        }
        let unit = self.scalar.is_one();
        if !unit || self.exponent == 0 {
            write!(f, "{}", self.scalar)?;
        }
        if self.exponent != 0 {
            if !unit {
                write!(f, "*")?;
            }
            match self.exponent {
                1 => write!(f, "q")?,
                e => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Truncated Laurent series with coefficients in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<T> {
    min_exp: i64,
    trunc: i64,
    coeffs: Vec<T>,
}

pub type QSeries = LaurentSeries<Rational>;

fn check_order(e: i64) -> Result<()> {
    if e.abs() > MAX_ORDER {
        Err(Error::OrderOverflow(e))
    } else {
        Ok(())
    }
}

impl<T: Coefficient> LaurentSeries<T> {
    /// Coefficients of `q^min_exp, q^(min_exp+1), ...`; missing ones are zero, extra ones dropped.
    pub fn new(min_exp: i64, trunc: i64, mut coeffs: Vec<T>) -> Result<Self> {
        check_order(min_exp)?;
        check_order(trunc)?;
        if trunc <= min_exp {
            return Ok(Self::zero(trunc));
        }
        coeffs.resize((trunc - min_exp) as usize, T::zero());
        Ok(Self::from_raw(min_exp, trunc, coeffs))
    }

    fn from_raw(min_exp: i64, trunc: i64, coeffs: Vec<T>) -> Self {
        let mut s = LaurentSeries { min_exp, trunc, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                self.min_exp = self.trunc - 1;
                self.coeffs = vec![T::zero()];
            }
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.min_exp += k as i64;
            }
        }
    }

    pub fn zero(trunc: i64) -> Self {
        LaurentSeries { min_exp: trunc - 1, trunc, coeffs: vec![T::zero()] }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(T::one(), 0, trunc)
    }

    /// `c q^e`, known below `trunc`.
    pub fn monomial(c: T, e: i64, trunc: i64) -> Self {
        if e >= trunc || c.is_zero() {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![T::zero(); (trunc - e) as usize];
        coeffs[0] = c;
        LaurentSeries { min_exp: e, trunc, coeffs }
    }

    pub fn from_monomial(m: &Monomial, trunc: i64) -> Self {
        Self::monomial(T::from_rational(&m.coeff()), m.exponent(), trunc)
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Exclusive upper bound of known exponents.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exponent of the first nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_exp)
        }
    }

    /// Lower bound on the true valuation; equals `trunc` for the zero series.
    pub fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.trunc)
    }

    pub fn coefficient(&self, e: i64) -> Result<T> {
        if e >= self.trunc {
            return Err(Error::BeyondTruncation { exponent: e, trunc: self.trunc });
        }
        Ok(self.coeff_unchecked(e))
    }

    fn coeff_unchecked(&self, e: i64) -> T {
        if e < self.min_exp || e >= self.trunc {
            T::zero()
        } else {
            self.coeffs[(e - self.min_exp) as usize].clone()
        }
    }

    /// `(exponent, coefficient)` for every nonzero known coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        let m = self.min_exp;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (m + i as i64, c))
    }

    /// Forget everything at or above `t`.
    pub fn truncate(mut self, t: i64) -> Self {
        if t >= self.trunc {
            return self;
        }
        if t <= self.min_exp {
            return Self::zero(t);
        }
        self.coeffs.truncate((t - self.min_exp) as usize);
        self.trunc = t;
        self.normalize();
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let min = self.min_exp.min(other.min_exp);
        if trunc <= min {
            return Self::zero(trunc);
        }
        let coeffs = (min..trunc)
            .map(|e| {
                let mut c = self.coeff_unchecked(e);
                c += &other.coeff_unchecked(e);
                c
            })
            .collect();
        Self::from_raw(min, trunc, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            min_exp: self.min_exp,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (va, vb) = (self.min_exp, other.min_exp);
        let min = va + vb;
        let trunc = (self.trunc + vb).min(other.trunc + va);
        if trunc <= min {
            return Self::zero(trunc);
        }
        let len = (trunc - min) as usize;
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += &a.mul_ref(b);
                }
            }
        }
        Self::from_raw(min, trunc, out)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        LaurentSeries {
            min_exp: self.min_exp,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { min_exp: self.min_exp + k, trunc: self.trunc + k, coeffs: self.coeffs.clone() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        self.scale(&T::from_rational(&m.coeff())).shift(m.exponent())
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::AllZeroPrefix);
        }
        let v = self.min_exp;
        let n = self.coeffs.len();
        let inv0 = T::one() / self.coeffs[0].clone();
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += &a.mul_ref(&out[k - j]);
                }
            }
            out.push(-acc.mul_ref(&inv0));
        }
        Ok(LaurentSeries { min_exp: -v, trunc: self.trunc - 2 * v, coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    /// `self^k`; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc.unwrap_or_else(|| Self::one(self.trunc - self.min_exp)))
    }

    /// `self * (1 - c q^e)` in O(length).
    pub fn mul_binomial(&self, c: &T, e: i64) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        if e == 0 {
            return self.scale(&(T::one() - c.clone()));
        }
        let min = self.min_exp + e.min(0);
        let trunc = self.trunc + e.min(0);
        if trunc <= min {
            return Self::zero(trunc);
        }
        let out = (min..trunc)
            .map(|k| {
                let mut a = self.coeff_unchecked(k);
                a -= &c.mul_ref(&self.coeff_unchecked(k - e));
                a
            })
            .collect();
        Self::from_raw(min, trunc, out)
    }

    /// `self / (1 - c q^e)` in O(length). For `e < 0` the factor is rewritten as
    /// `-c^{-1} q^{-e} / (1 - c^{-1} q^{-e})`.
    pub fn div_binomial(&self, c: &T, e: i64) -> Result<Self> {
        if c.is_zero() {
            return Ok(self.clone());
        }
        if e == 0 {
            let d = T::one() - c.clone();
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.scale(&(T::one() / d)));
        }
        if e < 0 {
            let ci = T::one() / c.clone();
            return self.shift(-e).scale(&-ci.clone()).div_binomial(&ci, -e);
        }
        let mut out = self.coeffs.clone();
        let step = e as usize;
        for k in step..out.len() {
            let add = c.mul_ref(&out[k - step]);
            out[k] += &add;
        }
        Ok(LaurentSeries { min_exp: self.min_exp, trunc: self.trunc, coeffs: out })
    }

    /// Image under `q -> q^m`, `m >= 1`.
    pub fn substitute_q_power(&self, m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("substitution power must be positive, got {m}")));
        }
        check_order(self.trunc * m)?;
        check_order(self.min_exp * m)?;
        let min = self.min_exp * m;
        let trunc = self.trunc * m;
        let mut out = vec![T::zero(); (trunc - min) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m as usize] = c.clone();
        }
        Ok(Self::from_raw(min, trunc, out))
    }

    /// First exponent below both truncations where the coefficients differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, T, T)> {
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.trunc.min(other.trunc);
        (lo..hi).find_map(|e| {
            let (a, b) = (self.coeff_unchecked(e), other.coeff_unchecked(e));
            (a != b).then_some((e, a, b))
        })
    }
}

impl LaurentSeries<Rational> {
    /// Coefficients as exact strings, lowest exponent first.
    pub fn coefficient_strings(&self) -> Vec<(i64, String)> {
        self.terms().map(|(e, c)| (e, c.to_string())).collect()
    }
}

impl<T: Coefficient> fmt::Display for LaurentSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = body == "1";
            match (e, unit) {
                (0, _) => write!(f, "{body}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{body}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{body}*q^{e}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q^{})", self.trunc)
    }
}

impl<T: Coefficient> Add for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn add(self, rhs: Self) -> LaurentSeries<T> {
        LaurentSeries::add(self, rhs)
    }
}

impl<T: Coefficient> Sub for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn sub(self, rhs: Self) -> LaurentSeries<T> {
        LaurentSeries::sub(self, rhs)
    }
}

impl<T: Coefficient> Mul for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn mul(self, rhs: Self) -> LaurentSeries<T> {
        LaurentSeries::mul(self, rhs)
    }
}

impl<T: Coefficient> Neg for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn neg(self) -> LaurentSeries<T> {
        LaurentSeries::neg(self)
    }
}

/// Evaluate `f` at growing working orders until its result is known below `trunc`.
///
/// `f(w)` must return a series whose truncation grows with `w`.
pub fn to_order<T, F>(trunc: i64, mut f: F) -> Result<LaurentSeries<T>>
where
    T: Coefficient,
    F: FnMut(i64) -> Result<LaurentSeries<T>>,
{
    check_order(trunc)?;
    let mut work = trunc;
    let mut reached = i64::MIN;
    for attempt in 0..12 {
        let s = f(work)?;
        if s.trunc() >= trunc {
            return Ok(s.truncate(trunc));
        }
        reached = reached.max(s.trunc());
        let deficit = trunc - s.trunc();
        work += deficit << attempt.min(4);
        if work > MAX_ORDER {
            break;
        }
    }
    Err(Error::TruncationNotReached { requested: trunc, reached })
}

/// `(x; q^step)_n`, exact polynomial, returned known below `trunc`.
pub fn pochhammer_finite<T: Coefficient>(x: &Monomial, step: i64, n: i64, trunc: i64) -> Result<LaurentSeries<T>> {
    check_order(trunc)?;
    if n < 0 {
        return Err(Error::InvalidArgument(format!("finite Pochhammer length must be nonnegative, got {n}")));
    }
    let c = T::from_rational(&x.coeff());
    let headroom: i64 = (0..n).map(|i| (-(x.exponent() + i * step)).max(0)).sum();
    check_order(trunc + headroom)?;
    let mut s = LaurentSeries::one(trunc + headroom);
    for i in 0..n {
        s = s.mul_binomial(&c, x.exponent() + i * step);
    }
    Ok(s.truncate(trunc))
}

/// `(x; q^step)_infinity`; requires `x` to have nonnegative exponent and `step >= 1`.
pub fn pochhammer_infinite<T: Coefficient>(x: &Monomial, step: i64, trunc: i64) -> Result<LaurentSeries<T>> {
    check_order(trunc)?;
    if step < 1 {
        return Err(Error::InvalidArgument(format!("Pochhammer step must be positive, got {step}")));
    }
    if x.exponent() < 0 {
        return Err(Error::DivergentProduct(format!("{x}; q^{step}")));
    }
    let c = T::from_rational(&x.coeff());
    let mut s = LaurentSeries::one(trunc);
    let mut e = x.exponent();
    while e < trunc {
        s = s.mul_binomial(&c, e);
        e += step;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64], min: i64, trunc: i64) -> QSeries {
        QSeries::new(min, trunc, coeffs.iter().map(|&c| rat(c, 1)).collect()).unwrap()
    }

    #[test]
    fn mul_truncation_uses_valuations() {
        let a = q(&[1, 1], -1, 5);
        let b = q(&[2], 2, 4);
        let p = a.mul(&b);
        assert_eq!(p.trunc(), 3);
        assert_eq!(p.min_exp(), 1);
    }

    #[test]
    fn invert_of_zero_prefix_fails() {
        assert_eq!(QSeries::zero(7).invert(), Err(Error::AllZeroPrefix));
    }

    #[test]
    fn coefficient_beyond_truncation_fails() {
        let s = q(&[1], 0, 3);
        assert!(matches!(s.coefficient(3), Err(Error::BeyondTruncation { exponent: 3, trunc: 3 })));
        assert_eq!(s.coefficient(-5).unwrap(), rat(0, 1));
    }

    #[test]
    fn geometric_inverse() {
        let s = q(&[1, -1], 0, 10);
        let inv = s.invert().unwrap();
        for e in 0..10 {
            assert_eq!(inv.coefficient(e).unwrap(), rat(1, 1));
        }
        assert_eq!(inv.trunc(), 10);
    }

    #[test]
    fn div_binomial_negative_exponent() {
        // 1/(1 - 2q^-1) = -(1/2) q / (1 - q/2)
        let s = QSeries::one(6).div_binomial(&rat(2, 1), -1).unwrap();
        assert_eq!(s.trunc(), 7);
        assert_eq!(s.coefficient(1).unwrap(), rat(-1, 2));
        assert_eq!(s.coefficient(2).unwrap(), rat(-1, 4));
        let back = s.mul_binomial(&rat(2, 1), -1);
        assert_eq!(back.first_mismatch(&QSeries::one(6)), None);
    }

    #[test]
    fn div_binomial_constant_one_fails() {
        assert_eq!(QSeries::one(4).div_binomial(&rat(1, 1), 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn negative_exponent_product_is_rejected() {
        assert!(matches!(
            pochhammer_infinite::<Rational>(&Monomial::q_pow(-1), 1, 10),
            Err(Error::DivergentProduct(_))
        ));
    }

    #[test]
    fn order_overflow_rejected() {
        assert!(matches!(pochhammer_infinite::<Rational>(&Monomial::q_pow(1), 1, 2_000_000), Err(Error::OrderOverflow(_))));
    }

    #[test]
    fn finite_pochhammer_with_negative_exponents() {
        // (q^-2; q)_2 = (1-q^-2)(1-q^-1) = q^-3 - q^-2 - q^-1 + 1
        let p: QSeries = pochhammer_finite(&Monomial::q_pow(-2), 1, 2, 4).unwrap();
        let expect = q(&[1, -1, -1, 1], -3, 4);
        assert_eq!(p.first_mismatch(&expect), None);
        assert_eq!(p.trunc(), 4);
    }

    #[test]
    fn substitution_scales_truncation() {
        let s = q(&[1, 2, 3], -1, 2).substitute_q_power(3).unwrap();
        assert_eq!((s.min_exp(), s.trunc()), (-3, 6));
        assert_eq!(s.coefficient(3).unwrap(), rat(3, 1));
        assert_eq!(s.coefficient(1).unwrap(), rat(0, 1));
    }

    #[test]
    fn pow_negative() {
        let s = q(&[1, -1], 0, 8);
        let p = s.pow(-2).unwrap();
        for e in 0..8 {
            assert_eq!(p.coefficient(e).unwrap(), rat(e + 1, 1));
        }
    }

    #[test]
    fn display() {
        let s = q(&[1, -2, 0, 1], -1, 4);
        assert_eq!(s.to_string(), "q^-1 - 2 + q^2 + O(q^4)");
        assert_eq!(Monomial::new(Sign::Minus, rat(1, 2), 3).to_string(), "-1/2*q^3");
    }

    #[test]
    fn monomial_sqrt() {
        assert_eq!(Monomial::new(Sign::Plus, rat(4, 9), 2).sqrt(), Some(Monomial::new(Sign::Plus, rat(2, 3), 1)));
        assert_eq!(Monomial::new(Sign::Plus, rat(2, 1), 2).sqrt(), None);
        assert_eq!(Monomial::q_pow(1).sqrt(), None);
    }

    #[test]
    fn float_series_kernel() {
        let s: LaurentSeries<f64> = pochhammer_infinite(&Monomial::q_pow(1), 1, 12).unwrap();
        // Euler's pentagonal theorem: 1 - q - q^2 + q^5 + q^7 - ...
        let expect = [1.0, -1.0, -1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        for (e, c) in expect.iter().enumerate() {
            assert_eq!(s.coefficient(e as i64).unwrap(), *c);
        }
    }
}
