//! Hecke-type double sums
//!
//! `f_{a,b,c}(x, y, q) = sum_{sg(r) = sg(s)} sg(r) (-1)^{r+s} x^r y^s q^{a r(r-1)/2 + b r s + c s(s-1)/2}`
//!
//! with `sg(r) = 1` for `r >= 0` and `-1` otherwise.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qlaurent::{Monomial, QSeries, Rational};

/// `f_{a,b,c}(x, y, q^base)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeckeSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: Monomial,
    pub y: Monomial,
    pub base: i64,
}

impl HeckeSpec {
    pub fn new(a: i64, b: i64, c: i64, x: Monomial, y: Monomial, base: i64) -> HeckeSpec {
        HeckeSpec { a, b, c, x, y, base }
    }

    /// Each quadrant has finitely many terms below any order iff `a, c > 0` and the
    /// cross term cannot win: `b >= 0` or `b^2 < ac`.
    pub fn check(&self) -> Result<()> {
        let ok = self.a > 0 && self.c > 0 && (self.b >= 0 || self.b * self.b < self.a * self.c) && self.base >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::NonTerminatingQuadrant(self.to_string()))
        }
    }

    /// Exponent of the `(r, s)` summand.
    pub fn exponent(&self, r: i64, s: i64) -> i64 {
        self.base * (self.a * r * (r - 1) / 2 + self.b * r * s + self.c * s * (s - 1) / 2)
            + r * self.x.exponent()
            + s * self.y.exponent()
    }

    /// Signed coefficient of the `(r, s)` summand; zero off the two quadrants.
    pub fn coefficient(&self, r: i64, s: i64) -> Rational {
        if (r >= 0) != (s >= 0) {
            return Rational::zero();
        }
        let c = self.x.negate().pow(r).times(&self.y.negate().pow(s)).coeff();
        if r >= 0 {
            c
        } else {
            -c
        }
    }

    pub fn subst(&self, m: i64) -> HeckeSpec {
        HeckeSpec { x: self.x.subst(m), y: self.y.subst(m), base: self.base * m, ..self.clone() }
    }
}

impl fmt::Display for HeckeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.base == 1 { "q".to_string() } else { format!("q^{}", self.base) };
        write!(f, "f_{{{},{},{}}}({}, {}, {q})", self.a, self.b, self.c, self.x, self.y)
    }
}

/// Minimum over `s` in the quadrant of a convex function of `s`, with its argmin.
fn quadrant_min(f: impl Fn(i64) -> i64, positive: bool) -> i64 {
    let mut s = if positive { 0 } else { -1 };
    let step = if positive { 1 } else { -1 };
    while f(s + step) < f(s) {
        s += step;
    }
    f(s)
}

/// Exact expansion below `trunc`, visiting only summands that can contribute.
pub fn hecke_series(spec: &HeckeSpec, trunc: i64) -> Result<QSeries> {
    spec.check()?;
    let mut terms: Vec<(i64, Rational)> = Vec::new();
    for positive in [true, false] {
        let dir = if positive { 1 } else { -1 };
        // Lower bound on the row minimum; convex in r, so rows stop once it is above
        // trunc and nondecreasing.
        let row_bound = |r: i64| -> i64 {
            if spec.b >= 0 {
                let ys = |s: i64| spec.base * spec.c * s * (s - 1) / 2 + s * spec.y.exponent();
                spec.base * spec.a * r * (r - 1) / 2 + r * spec.x.exponent() + quadrant_min(ys, positive)
            } else {
                quadrant_min(|s| spec.exponent(r, s), positive)
            }
        };
        let mut r = if positive { 0 } else { -1 };
        let mut rows = 0;
        loop {
            if row_bound(r) < trunc {
                let row = |s: i64| spec.exponent(r, s);
                let mut s = if positive { 0 } else { -1 };
                while row(s + dir) < row(s) {
                    s += dir;
                }
                // Walk both ways from the row minimum, staying in the quadrant.
                let start = s;
                let mut t = start;
                while (t >= 0) == positive && row(t) < trunc {
                    terms.push((row(t), spec.coefficient(r, t)));
                    t += dir;
                }
                let mut t = start - dir;
                while (t >= 0) == positive && row(t) < trunc {
                    terms.push((row(t), spec.coefficient(r, t)));
                    t -= dir;
                }
            } else if row_bound(r + dir) >= row_bound(r) {
                break;
            }
            r += dir;
            rows += 1;
            if rows > crate::qlaurent::MAX_ORDER {
                return Err(Error::NonTerminatingQuadrant(spec.to_string()));
            }
        }
    }
    collect(terms, trunc)
}

fn collect(terms: Vec<(i64, Rational)>, trunc: i64) -> Result<QSeries> {
    let min = terms.iter().map(|(e, _)| *e).min().unwrap_or(trunc);
    let mut coeffs = vec![Rational::zero(); (trunc - min).max(1) as usize];
    for (e, c) in terms {
        coeffs[(e - min) as usize] += c;
    }
    QSeries::new(min, trunc, coeffs)
}

/// Brute-force double loop over `|r|, |s| <= bound`, keeping exponents below `trunc`.
/// Only agrees with [`hecke_series`] when the box contains every contributing summand.
pub fn hecke_naive(spec: &HeckeSpec, bound: i64, trunc: i64) -> Result<QSeries> {
    let mut terms = Vec::new();
    for r in -bound..=bound {
        for s in -bound..=bound {
            let c = spec.coefficient(r, s);
            let e = spec.exponent(r, s);
            if !c.is_zero() && e < trunc {
                terms.push((e, c));
            }
        }
    }
    collect(terms, trunc)
}
