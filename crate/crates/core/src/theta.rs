//! The theta function `j(x; q^M) = (x)_inf (q^M/x)_inf (q^M)_inf`, all products in base `q^M`.
//!
//! Two independent routes are provided and must agree:
//!
//! - [`jtheta_product`] expands the three infinite products
//! - [`jtheta_sum`] uses `sum_n (-1)^n q^{M n(n-1)/2} x^n`
//!
//! `j(x; q^M)` vanishes identically exactly when `x` is `q^{Mk}` with unit scalar.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlaurent::{pochhammer_finite, pochhammer_infinite, Monomial, QSeries, MAX_ORDER};

/// `j(x; q^base)`. The scalar of `x` may be any nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    pub x: Monomial,
    pub base: i64,
}

impl ThetaSpec {
    pub fn new(x: Monomial, base: i64) -> ThetaSpec {
        assert!(base >= 1, "theta base must be a positive power of q");
        ThetaSpec { x, base }
    }

    /// `J_{a,m} = j(q^a; q^m)`.
    pub fn jam(a: i64, m: i64) -> ThetaSpec {
        ThetaSpec::new(Monomial::q_pow(a), m)
    }

    /// `Jbar_{a,m} = j(-q^a; q^m)`.
    pub fn jbar(a: i64, m: i64) -> ThetaSpec {
        ThetaSpec::new(Monomial::neg_q_pow(a), m)
    }

    /// `J_m = j(q^m; q^{3m}) = (q^m; q^m)_inf`.
    pub fn jm(m: i64) -> ThetaSpec {
        ThetaSpec::jam(m, 3 * m)
    }

    pub fn vanishes(&self) -> bool {
        self.x.on_lattice(self.base)
    }

    /// Image under `q -> q^m`.
    pub fn subst(&self, m: i64) -> ThetaSpec {
        ThetaSpec::new(self.x.subst(m), self.base * m)
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            1 => write!(f, "j({}; q)", self.x),
            b => write!(f, "j({}; q^{b})", self.x),
        }
    }
}

impl Serialize for ThetaSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Lowest exponent of the finite head of `(y; q^step)_inf`, i.e. the sum of its negative exponents.
fn head_valuation(y: &Monomial, step: i64) -> (i64, i64) {
    let e = y.exponent();
    if e >= 0 {
        return (0, 0);
    }
    let count = (-e + step - 1) / step;
    let val = (0..count).map(|i| e + i * step).sum();
    (count, val)
}

/// `(y; q^step)_inf` for any exponent of `y`: factors with negative exponent are
/// multiplied out as a finite product in front of the convergent tail.
pub fn pochhammer_split(y: &Monomial, step: i64, trunc: i64) -> Result<QSeries> {
    let (count, val) = head_valuation(y, step);
    if count == 0 {
        return pochhammer_infinite(y, step, trunc);
    }
    let head: QSeries = pochhammer_finite(y, step, count, trunc)?;
    let tail = pochhammer_infinite(&y.shift(count * step), step, trunc - val)?;
    Ok(head.mul(&tail).truncate(trunc))
}

/// `j(x; q^M)` from the product definition.
pub fn jtheta_product(spec: &ThetaSpec, trunc: i64) -> Result<QSeries> {
    if spec.vanishes() {
        return Ok(QSeries::zero(trunc));
    }
    let m = spec.base;
    let y2 = Monomial::q_pow(m).over(&spec.x);
    let (_, v1) = head_valuation(&spec.x, m);
    let (_, v2) = head_valuation(&y2, m);
    let work = trunc - v1 - v2;
    let p1 = pochhammer_split(&spec.x, m, work)?;
    let p2 = pochhammer_split(&y2, m, work)?;
    let p3 = pochhammer_infinite(&Monomial::q_pow(m), m, work)?;
    Ok(p1.mul(&p2).mul(&p3).truncate(trunc))
}

/// Exponents `n` in the interval where the convex function `f` stays below `trunc`.
pub(crate) fn convex_window(f: impl Fn(i64) -> i64, start: i64, trunc: i64) -> Result<(i64, i64)> {
    let mut c = start;
    // Slide to the minimum first.
    while f(c - 1) < f(c) {
        c -= 1;
    }
    while f(c + 1) < f(c) {
        c += 1;
    }
    if f(c) >= trunc {
        return Ok((c, c - 1));
    }
    let (mut lo, mut hi) = (c, c);
    while f(lo - 1) < trunc {
        lo -= 1;
        if c - lo > MAX_ORDER {
            return Err(Error::OrderOverflow(lo));
        }
    }
    while f(hi + 1) < trunc {
        hi += 1;
        if hi - c > MAX_ORDER {
            return Err(Error::OrderOverflow(hi));
        }
    }
    Ok((lo, hi))
}

/// `j(x; q^M)` from `sum_n (-1)^n q^{M n(n-1)/2} x^n`.
pub fn jtheta_sum(spec: &ThetaSpec, trunc: i64) -> Result<QSeries> {
    let m = spec.base;
    let a = spec.x.exponent();
    let expo = |n: i64| m * n * (n - 1) / 2 + a * n;
    let (lo, hi) = convex_window(expo, -a / m, trunc)?;
    if lo > hi {
        return Ok(QSeries::zero(trunc));
    }
    let min = (lo..=hi).map(expo).min().unwrap_or(trunc);
    let mut coeffs = vec![crate::Rational::from_integer(0.into()); (trunc - min) as usize];
    let step = spec.x.negate();
    for n in lo..=hi {
        coeffs[(expo(n) - min) as usize] += step.pow(n).coeff();
    }
    QSeries::new(min, trunc, coeffs)
}

/// `j(x; q^M)`; uses the sum form, which is cheaper.
pub fn jtheta(spec: &ThetaSpec, trunc: i64) -> Result<QSeries> {
    jtheta_sum(spec, trunc)
}

/// `prefactor * prod theta_i^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaQuotient {
    pub prefactor: Monomial,
    pub factors: Vec<(ThetaSpec, i64)>,
}

impl ThetaQuotient {
    pub fn new(prefactor: Monomial, factors: Vec<(ThetaSpec, i64)>) -> ThetaQuotient {
        ThetaQuotient { prefactor, factors }
    }

    /// Thetas in the denominator that vanish identically.
    pub fn vanishing_denominators(&self) -> Vec<&ThetaSpec> {
        self.factors.iter().filter(|(t, k)| *k < 0 && t.vanishes()).map(|(t, _)| t).collect()
    }

    pub fn series(&self, trunc: i64) -> Result<QSeries> {
        if let Some(t) = self.vanishing_denominators().first() {
            return Err(Error::ThetaDenominatorZero(t.to_string()));
        }
        crate::qlaurent::to_order(trunc, |w| {
            let mut acc = QSeries::from_monomial(&self.prefactor, w);
            for (t, k) in &self.factors {
                let s = jtheta(t, w)?;
                acc = acc.mul(&s.pow(*k)?);
            }
            Ok(acc)
        })
    }
}
