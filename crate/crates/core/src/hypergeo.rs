//! Unilateral q-hypergeometric sums
//!
//! `constant * sum_{n>=0} ratio^n q^{(quad n^2 + lin n)/div} prod_i (a_i; q^{s_i})_{l_i(n)} / prod_j (b_j; q^{t_j})_{l_j(n)}`
//!
//! with lengths affine in `n`. Pochhammer products are extended one binomial at a time.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::{Approx, NumCtx, SeriesAcc};
use crate::qlaurent::{to_order, Monomial, QSeries};
use crate::scalar::ComplexScalar;

/// `(a; q^step)_{len_n * n + len_c}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poch {
    pub a: Monomial,
    pub step: i64,
    pub len_n: i64,
    pub len_c: i64,
}

impl Poch {
    pub fn new(a: Monomial, step: i64, len_n: i64, len_c: i64) -> Poch {
        assert!(step >= 1 && len_n >= 0 && len_c >= 0, "Pochhammer lengths must be nondecreasing and nonnegative");
        Poch { a, step, len_n, len_c }
    }

    pub fn len(&self, n: i64) -> i64 {
        self.len_n * n + self.len_c
    }

    /// Exponent of the `i`-th factor `1 - a q^{step i}`.
    fn factor_exp(&self, i: i64) -> i64 {
        self.a.exponent() + self.step * i
    }

    /// The factor `1 - a q^{step i}` is the constant zero.
    fn factor_vanishes(&self, i: i64) -> bool {
        self.factor_exp(i) == 0 && self.a.coeff().is_one()
    }

    pub fn subst(&self, m: i64) -> Poch {
        Poch { a: self.a.subst(m), step: self.step * m, ..self.clone() }
    }
}

impl fmt::Display for Poch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = match (self.len_n, self.len_c) {
            (0, c) => format!("{c}"),
            (1, 0) => "n".to_string(),
            (1, c) => format!("n+{c}"),
            (k, 0) => format!("{k}n"),
            (k, c) => format!("{k}n+{c}"),
        };
        match self.step {
            1 => write!(f, "({}; q)_{{{len}}}", self.a),
            s => write!(f, "({}; q^{s})_{{{len}}}", self.a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EulerSum {
    pub constant: Monomial,
    pub ratio: Monomial,
    pub quad: i64,
    pub lin: i64,
    pub div: i64,
    pub num: Vec<Poch>,
    pub den: Vec<Poch>,
}

/// Cap on the number of summands in exact expansion.
const MAX_EXACT_TERMS: i64 = 200_000;

impl EulerSum {
    /// `sum_n q^{(quad n^2 + lin n)/div} num / den` with unit constant and ratio.
    pub fn new(quad: i64, lin: i64, div: i64, num: Vec<Poch>, den: Vec<Poch>) -> EulerSum {
        assert!(div >= 1 && (2 * quad) % div == 0 && (quad + lin) % div == 0, "exponent must be integral");
        EulerSum { constant: Monomial::one(), ratio: Monomial::one(), quad, lin, div, num, den }
    }

    pub fn with_ratio(mut self, r: Monomial) -> EulerSum {
        self.ratio = r;
        self
    }

    pub fn with_constant(mut self, c: Monomial) -> EulerSum {
        self.constant = c;
        self
    }

    /// Exponent of the `n`-th prefactor, including the ratio power.
    pub fn pref_exp(&self, n: i64) -> i64 {
        (self.quad * n * n + self.lin * n) / self.div + self.ratio.exponent() * n + self.constant.exponent()
    }

    /// Image under `q -> q^m`.
    pub fn subst(&self, m: i64) -> EulerSum {
        EulerSum {
            constant: self.constant.subst(m),
            ratio: self.ratio.subst(m),
            quad: self.quad * m,
            lin: self.lin * m,
            div: self.div,
            num: self.num.iter().map(|p| p.subst(m)).collect(),
            den: self.den.iter().map(|p| p.subst(m)).collect(),
        }
    }

    /// Denominator factors `1 - b q^{t i}` that vanish for some summand; such a sum is
    /// not defined unless a numerator factor vanishes no later.
    pub fn vanishing_denominators(&self) -> Vec<String> {
        let mut out = Vec::new();
        for d in &self.den {
            if d.len_n == 0 {
                if (0..d.len_c).any(|i| d.factor_vanishes(i)) {
                    out.push(d.to_string());
                }
            } else if d.a.is_unit_scalar() && d.a.sign() == crate::Sign::Plus && d.a.exponent() <= 0 && (-d.a.exponent()) % d.step == 0 {
                out.push(d.to_string());
            }
        }
        out
    }

    /// Exact expansion known below `trunc`.
    pub fn series(&self, trunc: i64) -> Result<QSeries> {
        to_order(trunc, |w| self.series_at(w))
    }

    fn series_at(&self, work: i64) -> Result<QSeries> {
        let one = QSeries::one(work);
        let mut run = one;
        let mut lens: Vec<i64> = Vec::new();
        let mut num_dead = false;
        for p in self.num.iter() {
            for i in 0..p.len_c {
                num_dead |= p.factor_vanishes(i);
                run = run.mul_binomial(&p.a.coeff(), p.factor_exp(i));
            }
            lens.push(p.len_c);
        }
        for p in self.den.iter() {
            for i in 0..p.len_c {
                if p.factor_vanishes(i) && !num_dead {
                    return Err(Error::DivergenceAtSpecialization(format!("denominator {p} vanishes")));
                }
                if !p.factor_vanishes(i) {
                    run = run.div_binomial(&p.a.coeff(), p.factor_exp(i))?;
                }
            }
            lens.push(p.len_c);
        }
        let ratio_c = self.ratio.coeff();
        let mut coef = self.constant.coeff();
        let mut acc = QSeries::zero(work);
        let all: Vec<(&Poch, bool)> = self.num.iter().map(|p| (p, true)).chain(self.den.iter().map(|p| (p, false))).collect();
        let mut n = 0i64;
        loop {
            if num_dead {
                break;
            }
            let e = self.pref_exp(n);
            if run.val_bound() + e < acc.trunc() {
                let term = run.scale(&coef).shift(e);
                acc = acc.add(&term);
            }
            // Once prefactor exponents increase and no future factor has a negative
            // exponent, term valuations only grow.
            let future_ok = all.iter().zip(&lens).all(|((p, _), &l)| p.factor_exp(l) >= 0);
            let steady = self.quad >= 0 && self.pref_exp(n + 1) > e;
            if future_ok && steady && run.val_bound() + e >= acc.trunc() {
                break;
            }
            n += 1;
            if n > MAX_EXACT_TERMS {
                return Err(Error::NoConvergenceBudget(n as usize));
            }
            coef *= &ratio_c;
            for (k, (p, is_num)) in all.iter().enumerate() {
                let new_len = p.len(n);
                for i in lens[k]..new_len {
                    if *is_num {
                        if p.factor_vanishes(i) {
                            num_dead = true;
                        }
                        run = run.mul_binomial(&p.a.coeff(), p.factor_exp(i));
                    } else if p.factor_vanishes(i) {
                        if !num_dead {
                            return Err(Error::DivergenceAtSpecialization(format!("denominator {p} vanishes at n = {n}")));
                        }
                    } else {
                        run = run.div_binomial(&p.a.coeff(), p.factor_exp(i))?;
                    }
                }
                lens[k] = new_len;
            }
        }
        Ok(acc)
    }

    /// Numeric value at `ctx.q` with error bound.
    pub fn eval_numeric<C: ComplexScalar>(&self, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
        let q = ctx.q.clone();
        let one = C::one_like(&q);
        let mut pref = ctx.mono(&self.constant);
        let ratio = ctx.mono(&self.ratio);
        let d0 = (self.quad + self.lin) / self.div;
        let mut qd = ctx.qpow(d0);
        let qdd = ctx.qpow(2 * self.quad / self.div);
        struct Run<C> {
            arg: C,
            qs: C,
            len: i64,
            num: bool,
        }
        let mut runs = Vec::new();
        let mut prod = one.clone();
        for (p, is_num) in self.num.iter().map(|p| (p, true)).chain(self.den.iter().map(|p| (p, false))) {
            let mut arg = ctx.mono(&p.a);
            let qs = ctx.qpow(p.step);
            for _ in 0..p.len_c {
                let f = one.sub(&arg);
                prod = apply(&prod, &f, is_num)?;
                arg = arg.mul(&qs);
            }
            runs.push((p, Run { arg, qs, len: p.len_c, num: is_num }));
        }
        let ops = 2.0 + 3.0 * runs.iter().map(|(p, _)| p.len_n as f64).sum::<f64>();
        let mut acc = SeriesAcc::new(&q);
        let mut n = 0i64;
        loop {
            let term = pref.mul(&prod);
            if acc.push(&term) {
                break;
            }
            if acc.terms >= ctx.max_terms {
                return Err(Error::NoConvergenceBudget(acc.terms));
            }
            n += 1;
            pref = pref.mul(&ratio).mul(&qd);
            qd = qd.mul(&qdd);
            for (p, r) in runs.iter_mut() {
                let target = p.len(n);
                while r.len < target {
                    let f = one.sub(&r.arg);
                    prod = apply(&prod, &f, r.num)?;
                    r.arg = r.arg.mul(&r.qs);
                    r.len += 1;
                }
            }
        }
        // Ops per summand grow with n through the running products.
        let err = acc.err(ops) + (n as f64 + 1.0).log2();
        Ok(Approx::computed(acc.sum, err))
    }
}

fn apply<C: ComplexScalar>(prod: &C, f: &C, num: bool) -> Result<C> {
    if num {
        Ok(prod.mul(f))
    } else if f.abs_log2() == f64::NEG_INFINITY {
        Err(Error::DivergenceAtSpecialization("denominator factor is zero".into()))
    } else {
        Ok(prod.div(f))
    }
}

impl fmt::Display for EulerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constant != Monomial::one() {
            write!(f, "{} * ", self.constant)?;
        }
        write!(f, "sum_n ")?;
        if self.ratio != Monomial::one() {
            write!(f, "({})^n ", self.ratio)?;
        }
        write!(f, "q^(({}n^2 + {}n)/{})", self.quad, self.lin, self.div)?;
        for p in &self.num {
            write!(f, " {p}")?;
        }
        if !self.den.is_empty() {
            write!(f, " /")?;
            for p in &self.den {
                write!(f, " {p}")?;
            }
        }
        Ok(())
    }
}

/// Quick constructor: `(a; q^step)_{len_n n + len_c}`.
pub fn poch(a: Monomial, step: i64, len_n: i64, len_c: i64) -> Poch {
    Poch::new(a, step, len_n, len_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::{rat, Rational};

    #[test]
    fn third_order_f_frozen() {
        // sum q^{n^2} / (-q; q)_n^2, first coefficients tabulated independently.
        let f = EulerSum::new(1, 0, 1, vec![], vec![poch(Monomial::neg_q_pow(1), 1, 1, 0), poch(Monomial::neg_q_pow(1), 1, 1, 0)]);
        let s = f.series(20).unwrap();
        let expect = [1, 1, -2, 3, -3, 3, -5, 7, -6, 6, -10, 12, -11, 13, -17, 20, -21, 21, -27, 34];
        for (e, c) in expect.iter().enumerate() {
            assert_eq!(s.coefficient(e as i64).unwrap(), rat(*c, 1), "q^{e}");
        }
    }

    #[test]
    fn euler_partition_identity() {
        // sum q^n / (q; q)_n = 1 / (q; q)_inf
        let lhs = EulerSum::new(0, 1, 1, vec![], vec![poch(Monomial::q_pow(1), 1, 1, 0)]).series(30).unwrap();
        let rhs = crate::qlaurent::pochhammer_infinite::<Rational>(&Monomial::q_pow(1), 1, 30).unwrap().invert().unwrap();
        assert_eq!(lhs.first_mismatch(&rhs), None);
    }

    #[test]
    fn vanishing_denominator_detected() {
        let s = EulerSum::new(1, 0, 1, vec![], vec![poch(Monomial::q_pow(-2), 1, 1, 0)]);
        assert!(matches!(s.series(10), Err(Error::DivergenceAtSpecialization(_))));
        assert_eq!(s.vanishing_denominators().len(), 1);
    }

    #[test]
    fn terminating_numerator() {
        // sum (q^-2; q)_n q^n terminates after three terms
        let s = EulerSum::new(0, 1, 1, vec![poch(Monomial::q_pow(-2), 1, 1, 0)], vec![]).series(10).unwrap();
        // 1 + (1-q^-2) q + (1-q^-2)(1-q^-1) q^2 = q^2
        let expect = QSeries::monomial(rat(1, 1), 2, 10);
        assert_eq!(s.first_mismatch(&expect), None, "{s}");
    }
}
