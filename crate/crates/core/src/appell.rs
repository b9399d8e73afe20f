//! The Appell-Lerch sum
//!
//! `m(x, q^M, z) = (1 / j(z; q^M)) * sum_r (-1)^r q^{M r(r-1)/2} z^r / (1 - q^{M(r-1)} x z)`
//!
//! and the regularized bilateral sum that stands in for divergent Eulerian forms.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlaurent::{to_order, Monomial, QSeries, Rational};
use crate::theta::{convex_window, jtheta, ThetaSpec};

/// `m(x, q^base, z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AppellSpec {
    pub x: Monomial,
    pub z: Monomial,
    pub base: i64,
}

impl AppellSpec {
    pub fn new(x: Monomial, base: i64, z: Monomial) -> AppellSpec {
        assert!(base >= 1, "Appell-Lerch base must be a positive power of q");
        AppellSpec { x, z, base }
    }

    /// The theta in front of the sum.
    pub fn denominator(&self) -> ThetaSpec {
        ThetaSpec::new(self.z.clone(), self.base)
    }

    /// Some summand denominator `1 - q^{M(r-1)} x z` vanishes iff `x z` is `q^{Mk}`.
    pub fn pole_theta(&self) -> ThetaSpec {
        ThetaSpec::new(self.x.times(&self.z), self.base)
    }

    pub fn check(&self) -> Result<()> {
        if self.denominator().vanishes() {
            return Err(Error::ThetaDenominatorZero(self.denominator().to_string()));
        }
        if self.pole_theta().vanishes() {
            return Err(Error::PoleAtSummand(format!("{self}: x z = {}", self.x.times(&self.z))));
        }
        Ok(())
    }

    pub fn subst(&self, m: i64) -> AppellSpec {
        AppellSpec::new(self.x.subst(m), self.base * m, self.z.subst(m))
    }
}

impl fmt::Display for AppellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            1 => write!(f, "m({}, q, {})", self.x, self.z),
            b => write!(f, "m({}, q^{b}, {})", self.x, self.z),
        }
    }
}

impl Serialize for AppellSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Add `coef * q^e / (1 - u)` into `acc` (exponents from `min`), where `u` is a monomial
/// with nonzero exponent or a constant different from one.
fn add_geometric(acc: &mut [Rational], min: i64, trunc: i64, coef: &Rational, e: i64, u: &Monomial) -> Result<()> {
    let ue = u.exponent();
    let uc = u.coeff();
    if ue == 0 {
        let d = Rational::one() - uc;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if e < trunc {
            acc[(e - min) as usize] += coef / d;
        }
        return Ok(());
    }
    // 1/(1-u) = sum_k u^k for ue > 0, and -sum_{k>=1} u^{-k} for ue < 0.
    let (mut c, mut ex, ratio, dstep) = if ue > 0 {
        (coef.clone(), e, uc, ue)
    } else {
        let inv = uc.recip();
        (-coef * &inv, e - ue, inv, -ue)
    };
    while ex < trunc {
        acc[(ex - min) as usize] += &c;
        c *= &ratio;
        ex += dstep;
    }
    Ok(())
}

/// The bilateral sum without the theta prefactor, known below `trunc`.
fn appell_numerator(spec: &AppellSpec, trunc: i64) -> Result<QSeries> {
    let m = spec.base;
    let ez = spec.z.exponent();
    let exz = spec.x.exponent() + ez;
    let uexp = |r: i64| m * (r - 1) + exz;
    let nexp = |r: i64| m * r * (r - 1) / 2 + r * ez;
    let val = |r: i64| nexp(r) + (-uexp(r)).max(0);
    let (lo, hi) = convex_window(val, -ez / m, trunc)?;
    if lo > hi {
        return Ok(QSeries::zero(trunc));
    }
    let min = (lo..=hi).map(val).min().unwrap_or(trunc);
    let mut acc = vec![Rational::zero(); (trunc - min) as usize];
    let zstep = spec.z.negate();
    let xz = spec.x.times(&spec.z);
    for r in lo..=hi {
        let coef = zstep.pow(r).coeff();
        let u = xz.shift(m * (r - 1));
        add_geometric(&mut acc, min, trunc, &coef, nexp(r), &u)?;
    }
    QSeries::new(min, trunc, acc)
}

/// `m(x, q^M, z)` known below `trunc`.
pub fn m_series(spec: &AppellSpec, trunc: i64) -> Result<QSeries> {
    spec.check()?;
    to_order(trunc, |w| {
        let j = jtheta(&spec.denominator(), w)?;
        let s = appell_numerator(spec, w)?;
        Ok(s.mul(&j.invert()?))
    })
}

/// Regularized bilateral sum in base `q^M`:
///
/// `(1 / j(-1; q^M)) * sum_n (1 + 1/x) q^{M n(n+1)/2} / ((1 + x q^{Mn}) (1 + q^{Mn}/x))`.
///
/// Converges for every `x` off `-q^{Mk}`, including where the Eulerian form it replaces
/// has no convergent expansion.
pub fn sumstar_series(x: &Monomial, base: i64, trunc: i64) -> Result<QSeries> {
    if x.negate().on_lattice(base) {
        return Err(Error::PoleAtSummand(format!("1 + x q^{{{base}n}} vanishes for x = {x}")));
    }
    let m = base;
    let e = x.exponent();
    let nexp = |n: i64| m * n * (n + 1) / 2;
    let val = |n: i64| nexp(n) + (-(m * n + e)).max(0) + (-(m * n - e)).max(0);
    let xi = x.inv();
    to_order(trunc, |w| {
        let (lo, hi) = convex_window(val, 0, w)?;
        let mut acc = QSeries::zero(w);
        for n in lo..=hi {
            let t = QSeries::monomial(Rational::one(), nexp(n), w + val(n) - nexp(n))
                .div_binomial(&-x.coeff(), m * n + e)?
                .div_binomial(&-xi.coeff(), m * n - e)?;
            acc = acc.add(&t);
        }
        let acc = acc.mul_binomial(&-xi.coeff(), xi.exponent());
        let jb = jtheta(&ThetaSpec::jbar(0, m), w)?;
        Ok(acc.mul(&jb.invert()?))
    })
}
