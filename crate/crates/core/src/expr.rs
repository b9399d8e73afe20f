//! Expression trees over q-series building blocks.
//!
//! An [`Expr`] is evaluated either exactly (as a truncated Laurent series) or numerically
//! at a point `q`, and can be scanned for denominators that vanish identically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::appell::{m_series, sumstar_series, AppellSpec};
use crate::error::{Error, Result};
use crate::hecke::{hecke_series, HeckeSpec};
use crate::hypergeo::EulerSum;
use crate::numeric::{appell_numeric, poch_inf_numeric, sumstar_numeric, theta_numeric, Approx, NumCtx};
use crate::qlaurent::{rat, to_order, Monomial, QSeries, Rational};
use crate::scalar::ComplexScalar;
use crate::theta::{jtheta, pochhammer_split, ThetaSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Mono(Monomial),
    Theta(ThetaSpec),
    /// `(x; q^step)_inf`.
    PochInf(Monomial, i64),
    Appell(AppellSpec),
    Euler(Arc<EulerSum>),
    /// Regularized bilateral sum in `x`, base `q^M`.
    SumStar(Monomial, i64),
    Hecke(Arc<HeckeSpec>),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, i64),
}

/// A denominator that vanishes identically at a specialization. `theta` names the theta
/// function responsible when there is one; constant factors such as `1 - w` at `w = 1`
/// have none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub theta: Option<ThetaSpec>,
    pub context: String,
}

impl Violation {
    fn theta(t: ThetaSpec, context: impl Into<String>) -> Violation {
        Violation { theta: Some(t), context: context.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.theta {
            Some(t) => write!(f, "{t} ({})", self.context),
            None => write!(f, "{}", self.context),
        }
    }
}

impl Expr {
    pub fn int(k: i64) -> Expr {
        Expr::Mono(Monomial::int(k))
    }
    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Mono(Monomial::constant(rat(n, d)))
    }
    pub fn mono(m: Monomial) -> Expr {
        Expr::Mono(m)
    }
    pub fn theta(x: Monomial, base: i64) -> Expr {
        Expr::Theta(ThetaSpec::new(x, base))
    }
    pub fn appell(x: Monomial, base: i64, z: Monomial) -> Expr {
        Expr::Appell(AppellSpec::new(x, base, z))
    }
    pub fn euler(s: EulerSum) -> Expr {
        Expr::Euler(Arc::new(s))
    }
    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }
    pub fn inv(self) -> Expr {
        self.pow(-1)
    }

    /// Exact expansion known below `trunc`.
    pub fn series(&self, trunc: i64) -> Result<QSeries> {
        if let Some(v) = self.violations().first() {
            return Err(Error::NonGenericSpecialization(vec![v.to_string()]));
        }
        to_order(trunc, |w| self.series_at(w))
    }

    fn series_at(&self, w: i64) -> Result<QSeries> {
        Ok(match self {
            Expr::Mono(m) => QSeries::from_monomial(m, w),
            Expr::Theta(t) => jtheta(t, w)?,
            Expr::PochInf(x, step) => pochhammer_split(x, *step, w)?,
            Expr::Appell(a) => m_series(a, w)?,
            Expr::Euler(s) => s.series(w)?,
            Expr::SumStar(x, m) => sumstar_series(x, *m, w)?,
            Expr::Hecke(h) => hecke_series(h, w)?,
            Expr::Sum(items) => {
                let mut acc = QSeries::zero(w);
                for e in items {
                    acc = acc.add(&e.series_at(w)?);
                }
                acc
            }
            Expr::Prod(items) => {
                let mut acc = QSeries::one(w);
                for e in items {
                    acc = acc.mul(&e.series_at(w)?);
                }
                acc
            }
            Expr::Pow(e, k) => {
                let s = e.series_at(w)?;
                if *k < 0 && s.is_zero() {
                    return Err(match &**e {
                        Expr::Theta(t) => Error::ThetaDenominatorZero(t.to_string()),
                        _ => Error::AllZeroPrefix,
                    });
                }
                s.pow(*k)?
            }
        })
    }

    /// Numeric value at `ctx.q`, with error bound.
    pub fn eval_numeric<C: ComplexScalar>(&self, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
        Ok(match self {
            Expr::Mono(m) => {
                let v = ctx.mono(m);
                let err = v.abs_log2() + ((m.exponent().abs() + 2) as f64).log2() - ctx.prec() as f64;
                Approx::computed(v, err)
            }
            Expr::Theta(t) => theta_numeric(t, ctx)?,
            Expr::PochInf(x, step) => poch_inf_numeric(x, *step, ctx)?,
            Expr::Appell(a) => appell_numeric(a, ctx)?,
            Expr::Euler(s) => s.eval_numeric(ctx)?,
            Expr::SumStar(x, m) => sumstar_numeric(x, *m, ctx)?,
            Expr::Hecke(h) => return Err(Error::InvalidArgument(format!("no numeric evaluator for {h}"))),
            Expr::Sum(items) => {
                let mut acc = Approx::exact(C::zero_like(&ctx.q));
                for e in items {
                    acc = acc.add(&e.eval_numeric(ctx)?);
                }
                acc
            }
            Expr::Prod(items) => {
                let mut acc = Approx::exact_one(&ctx.q);
                for e in items {
                    acc = acc.mul(&e.eval_numeric(ctx)?);
                }
                acc
            }
            Expr::Pow(e, k) => e.eval_numeric(ctx)?.powi(*k)?,
        })
    }

    /// Denominators that vanish identically.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.scan(&mut out);
        out.dedup();
        out
    }

    fn scan(&self, out: &mut Vec<Violation>) {
        match self {
            Expr::Mono(_) | Expr::Theta(_) | Expr::PochInf(..) | Expr::Hecke(_) => {}
            Expr::Appell(a) => {
                if a.denominator().vanishes() {
                    out.push(Violation::theta(a.denominator(), format!("prefactor of {a}")));
                }
                if a.pole_theta().vanishes() {
                    out.push(Violation::theta(a.pole_theta(), format!("summand pole of {a}")));
                }
            }
            Expr::Euler(s) => {
                for d in s.vanishing_denominators() {
                    // Report the finite product through the theta it truncates.
                    let p = s.den.iter().find(|p| p.to_string() == d).expect("listed denominator");
                    out.push(Violation::theta(ThetaSpec::new(p.a.clone(), p.step), format!("denominator {d}")));
                }
            }
            Expr::SumStar(x, m) => {
                let t = ThetaSpec::new(x.negate(), *m);
                if t.vanishes() {
                    out.push(Violation::theta(t, "pole of the regularized bilateral sum"));
                }
            }
            Expr::Sum(items) | Expr::Prod(items) => items.iter().for_each(|e| e.scan(out)),
            Expr::Pow(e, k) => {
                if *k < 0 {
                    e.scan_zero_factors(out);
                }
                e.scan(out);
            }
        }
    }

    /// Factors of a denominator that vanish identically. Products and positive powers
    /// are searched factor by factor.
    fn scan_zero_factors(&self, out: &mut Vec<Violation>) {
        match self {
            Expr::Theta(t) if t.vanishes() => out.push(Violation::theta(t.clone(), "theta denominator")),
            // (x; q^s)_inf has the factor 1 - 1 iff x = q^{-s i}, i >= 0.
            Expr::PochInf(x, s) if x.on_lattice(*s) && x.exponent() <= 0 => {
                out.push(Violation::theta(ThetaSpec::new(x.clone(), *s), format!("denominator {self}")))
            }
            Expr::Prod(items) => items.iter().for_each(|e| e.scan_zero_factors(out)),
            Expr::Pow(e, k) if *k > 0 => e.scan_zero_factors(out),
            _ if self.laurent_poly().is_some_and(|p| p.is_empty()) => {
                out.push(Violation { theta: None, context: format!("denominator {self} is zero") })
            }
            _ => {}
        }
    }

    /// Every theta that appears in a denominator, including Appell-Lerch prefactors and
    /// summand poles, for reporting.
    pub fn denominators(&self) -> Vec<ThetaSpec> {
        let mut out = Vec::new();
        self.collect_denominators(&mut out);
        out
    }

    fn collect_denominators(&self, out: &mut Vec<ThetaSpec>) {
        let mut push = |t: ThetaSpec| {
            if !out.contains(&t) {
                out.push(t)
            }
        };
        match self {
            Expr::Appell(a) => {
                push(a.denominator());
                push(a.pole_theta());
            }
            Expr::Euler(s) => s.den.iter().for_each(|p| push(ThetaSpec::new(p.a.clone(), p.step))),
            Expr::SumStar(x, m) => {
                push(ThetaSpec::new(x.negate(), *m));
                push(ThetaSpec::jbar(0, *m));
            }
            Expr::Pow(e, k) if *k < 0 => {
                let mut factors = Vec::new();
                e.denominator_factors(&mut factors);
                for t in factors {
                    push(t);
                }
                e.collect_denominators(out);
            }
            Expr::Pow(e, _) => e.collect_denominators(out),
            Expr::Sum(items) | Expr::Prod(items) => items.iter().for_each(|e| e.collect_denominators(out)),
            _ => {}
        }
    }

    /// Thetas among the factors of an expression used as a denominator.
    fn denominator_factors(&self, out: &mut Vec<ThetaSpec>) {
        match self {
            Expr::Theta(t) => out.push(t.clone()),
            Expr::PochInf(x, s) => out.push(ThetaSpec::new(x.clone(), *s)),
            Expr::Prod(items) => items.iter().for_each(|e| e.denominator_factors(out)),
            Expr::Pow(e, k) if *k > 0 => e.denominator_factors(out),
            _ => {}
        }
    }

    /// Nonzero coefficients when the expression is a Laurent polynomial built from
    /// monomials by sums, products and nonnegative powers.
    pub fn laurent_poly(&self) -> Option<BTreeMap<i64, Rational>> {
        let mut out = BTreeMap::new();
        match self {
            Expr::Mono(m) => {
                out.insert(m.exponent(), m.coeff());
            }
            Expr::Sum(items) => {
                for e in items {
                    for (k, c) in e.laurent_poly()? {
                        *out.entry(k).or_insert_with(Rational::zero) += c;
                    }
                }
            }
            Expr::Prod(items) => {
                out.insert(0, Rational::one());
                for e in items {
                    let p = e.laurent_poly()?;
                    let mut next = BTreeMap::new();
                    for (a, ca) in &out {
                        for (b, cb) in &p {
                            *next.entry(a + b).or_insert_with(Rational::zero) += ca * cb;
                        }
                    }
                    out = next;
                }
            }
            Expr::Pow(e, k) if *k >= 0 => {
                return Expr::Prod(vec![(**e).clone(); *k as usize]).laurent_poly();
            }
            _ => return None,
        }
        out.retain(|_, c| !c.is_zero());
        Some(out)
    }

    fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Mono(m) if m.coeff().is_zero())
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Sum(mut v) => {
                v.push(rhs);
                Expr::Sum(v)
            }
            e => Expr::Sum(vec![e, rhs]),
        }
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Mono(m) => Expr::Mono(m.negate()),
            Expr::Prod(mut v) => {
                match v.first_mut() {
                    Some(Expr::Mono(m)) => *m = m.negate(),
                    _ => v.insert(0, Expr::int(-1)),
                }
                Expr::Prod(v)
            }
            e => Expr::Prod(vec![Expr::int(-1), e]),
        }
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Prod(mut a), Expr::Prod(b)) => {
                a.extend(b);
                Expr::Prod(a)
            }
            (Expr::Prod(mut a), e) => {
                a.push(e);
                Expr::Prod(a)
            }
            (e, Expr::Prod(mut b)) => {
                b.insert(0, e);
                Expr::Prod(b)
            }
            (a, b) => Expr::Prod(vec![a, b]),
        }
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        self * rhs.inv()
    }
}

impl From<Monomial> for Expr {
    fn from(m: Monomial) -> Expr {
        Expr::Mono(m)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Mono(m) => write!(f, "{m}"),
            Expr::Theta(t) => write!(f, "{t}"),
            Expr::PochInf(x, s) if *s == 1 => write!(f, "({x}; q)_inf"),
            Expr::PochInf(x, s) => write!(f, "({x}; q^{s})_inf"),
            Expr::Appell(a) => write!(f, "{a}"),
            Expr::Euler(s) => write!(f, "[{s}]"),
            Expr::SumStar(x, m) => write!(f, "sumstar({x}; q^{m})"),
            Expr::Hecke(h) => write!(f, "{h}"),
            Expr::Sum(items) => {
                write!(f, "(")?;
                for (i, e) in items.iter().filter(|e| !e.is_zero_const()).enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Expr::Prod(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            Expr::Pow(e, k) => write!(f, "({e})^{k}"),
        }
    }
}

/// `1 + c` for a monomial `c`, as an expression.
pub fn one_plus(c: Monomial) -> Expr {
    Expr::Sum(vec![Expr::int(1), Expr::Mono(c)])
}

/// Constant `n/d` as a rational.
pub fn r(n: i64, d: i64) -> Rational {
    if d == 1 && n == 1 {
        Rational::one()
    } else {
        rat(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_theta_denominator_is_reported() {
        let e = Expr::int(1) / Expr::theta(Monomial::q_pow(2), 1);
        let v = e.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].theta, Some(ThetaSpec::new(Monomial::q_pow(2), 1)));
        assert!(matches!(e.series(10), Err(Error::NonGenericSpecialization(_))));
    }

    #[test]
    fn appell_pole_is_reported() {
        let e = Expr::appell(Monomial::q_pow(1), 1, Monomial::q_pow(-1).negate().negate());
        assert!(!e.violations().is_empty());
    }

    #[test]
    fn zero_constant_and_product_denominators_are_reported() {
        let w = Monomial::one();
        let e = Expr::int(1) / one_plus(w.negate());
        assert_eq!(e.violations().len(), 1);
        assert!(e.violations()[0].theta.is_none());
        let e = Expr::int(1) / Expr::PochInf(Monomial::q_pow(-2), 1);
        assert_eq!(e.violations().len(), 1);
        let e = Expr::int(1) / Expr::PochInf(Monomial::q_pow(2), 1);
        assert!(e.violations().is_empty());
    }

    #[test]
    fn arithmetic_matches_series() {
        let a = Expr::theta(Monomial::neg_q_pow(0), 1);
        let b = Expr::theta(Monomial::q_pow(1), 3);
        let e = (a.clone() * b.clone() - b.clone()) / b;
        let lhs = e.series(20).unwrap();
        let rhs = a.series(20).unwrap().sub(&QSeries::one(20));
        assert_eq!(lhs.first_mismatch(&rhs), None);
    }
}
