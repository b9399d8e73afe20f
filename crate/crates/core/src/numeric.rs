//! Numeric evaluation with running error bounds.
//!
//! Every value carries `log2` bounds: `mag` (upper bound on `|value|`), `lo` (lower
//! bound, `-inf` when unknown) and `err` (absolute error). Errors scale as `2^-p` in the
//! working precision `p`, which is what precision escalation relies on.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlaurent::Monomial;
use crate::scalar::ComplexScalar;
use crate::theta::ThetaSpec;

/// `log2(2^a + 2^b)`.
pub fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// `log2(2^a - 2^b)` for `a > b`; `-inf` otherwise.
pub fn log2_sub(a: f64, b: f64) -> f64 {
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + (1.0 - (b - a).exp2()).log2()
}

#[derive(Clone, Debug)]
pub struct Approx<C> {
    pub v: C,
    pub mag: f64,
    pub lo: f64,
    pub err: f64,
}

impl<C: ComplexScalar> Approx<C> {
    /// A computed value with absolute error bound `2^err`.
    pub fn computed(v: C, err: f64) -> Approx<C> {
        let a = v.abs_log2();
        Approx { mag: log2_add(a, err), lo: log2_sub(a, err), v, err }
    }

    /// A value exact up to one rounding.
    pub fn rounded(v: C) -> Approx<C> {
        let err = v.abs_log2() - v.precision() as f64;
        Approx::computed(v, err)
    }

    pub fn add(&self, o: &Approx<C>) -> Approx<C> {
        let v = self.v.add(&o.v);
        let err = log2_add(log2_add(self.err, o.err), log2_add(self.mag, o.mag) - v.precision() as f64);
        Approx::computed(v, err)
    }

    pub fn neg(&self) -> Approx<C> {
        Approx { v: self.v.neg(), ..self.clone() }
    }

    pub fn mul(&self, o: &Approx<C>) -> Approx<C> {
        let v = self.v.mul(&o.v);
        let err = log2_add(
            log2_add(self.mag + o.err, o.mag + self.err),
            self.mag + o.mag - v.precision() as f64 + 1.0,
        );
        let mut a = Approx::computed(v, err);
        a.mag = a.mag.min(self.mag + o.mag);
        a.lo = a.lo.max(self.lo + o.lo);
        a
    }

    pub fn div(&self, o: &Approx<C>) -> Result<Approx<C>> {
        // A denominator needs a trustworthy lower bound well above its error.
        if o.lo == f64::NEG_INFINITY || o.err > o.lo - 1.0 {
            if o.v.abs_log2() == f64::NEG_INFINITY {
                return Err(Error::DivisionByZero);
            }
            let v = self.v.div(&o.v);
            return Ok(Approx { mag: f64::INFINITY, lo: f64::NEG_INFINITY, v, err: f64::INFINITY });
        }
        let v = self.v.div(&o.v);
        let err = log2_add(
            log2_add(self.err - o.lo, self.mag + o.err - 2.0 * o.lo + 1.0),
            self.mag - o.lo - v.precision() as f64 + 1.0,
        );
        let mut a = Approx::computed(v, err);
        a.mag = a.mag.min(self.mag - o.lo);
        a.lo = a.lo.max(self.lo - o.mag);
        Ok(a)
    }

    pub fn powi(&self, k: i64) -> Result<Approx<C>> {
        if k < 0 {
            let one = Approx::exact_one(&self.v);
            return one.div(&self.powi(-k)?);
        }
        let mut acc = Approx::exact_one(&self.v);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn exact_one(like: &C) -> Approx<C> {
        Approx { v: C::one_like(like), mag: 0.0, lo: 0.0, err: f64::NEG_INFINITY }
    }

    pub fn exact(v: C) -> Approx<C> {
        let a = v.abs_log2();
        Approx { v, mag: a, lo: a, err: f64::NEG_INFINITY }
    }
}

/// How theta functions are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaMode {
    /// Triple-product sum; fast, but loses bits to cancellation near the unit circle.
    Sum,
    /// Infinite products; no cancellation, but term count grows like `precision / (1 - |q|)`.
    Product,
    /// Double-precision log-product value, with the error bound of the sum form.
    /// Used only to plan the working precision.
    Estimate,
}

/// Evaluation state for one value of `q`.
pub struct NumCtx<C> {
    pub q: C,
    pub mode: ThetaMode,
    pub max_terms: usize,
    /// Largest number of bits any theta sum loses to cancellation, as seen by
    /// [`ThetaMode::Estimate`].
    pub theta_loss: f64,
    q64: Complex64,
    theta_cache: HashMap<ThetaSpec, Approx<C>>,
    qpow_cache: HashMap<i64, C>,
}

impl<C: ComplexScalar> NumCtx<C> {
    pub fn new(q: C, mode: ThetaMode, max_terms: usize) -> NumCtx<C> {
        let q64 = q.to_c64();
        NumCtx { q, mode, max_terms, theta_loss: 0.0, q64, theta_cache: HashMap::new(), qpow_cache: HashMap::new() }
    }

    pub fn prec(&self) -> u32 {
        self.q.precision()
    }

    pub fn q64(&self) -> Complex64 {
        self.q64
    }

    pub fn qpow(&mut self, e: i64) -> C {
        if let Some(v) = self.qpow_cache.get(&e) {
            return v.clone();
        }
        let v = self.q.powi(e);
        self.qpow_cache.insert(e, v.clone());
        v
    }

    /// Numeric value of `sign * scalar * q^e`.
    pub fn mono(&mut self, m: &Monomial) -> C {
        let c = C::from_rational_like(&m.coeff(), &self.q);
        c.mul(&self.qpow(m.exponent()))
    }

    pub fn constant(&self, r: &crate::Rational) -> C {
        C::from_rational_like(r, &self.q)
    }

    pub(crate) fn cached_theta(&self, t: &ThetaSpec) -> Option<Approx<C>> {
        self.theta_cache.get(t).cloned()
    }

    pub(crate) fn store_theta(&mut self, t: ThetaSpec, a: Approx<C>) {
        self.theta_cache.insert(t, a);
    }
}

/// Accumulates a convergent numeric series and decides when to stop.
///
/// Stops after five consecutive terms that are each smaller than the previous one and
/// below `2^-(p+32)` times the largest term seen.
pub(crate) struct SeriesAcc<C> {
    pub sum: C,
    abs_sum: f64,
    max_term: f64,
    last: f64,
    quiet: usize,
    pub terms: usize,
    prec: f64,
}

impl<C: ComplexScalar> SeriesAcc<C> {
    pub fn new(like: &C) -> SeriesAcc<C> {
        SeriesAcc {
            sum: C::zero_like(like),
            abs_sum: f64::NEG_INFINITY,
            max_term: f64::NEG_INFINITY,
            last: f64::INFINITY,
            quiet: 0,
            terms: 0,
            prec: like.precision() as f64,
        }
    }

    /// Adds `t`; returns true once the tail is negligible.
    pub fn push(&mut self, t: &C) -> bool {
        let a = t.abs_log2();
        self.sum = self.sum.add(t);
        self.abs_sum = log2_add(self.abs_sum, a);
        self.max_term = self.max_term.max(a);
        self.terms += 1;
        if a < self.max_term - self.prec - 32.0 && a <= self.last {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.last = a;
        self.quiet >= 5
    }

    /// `log2` of the absolute error, assuming each term carries `ops` roundings per index.
    pub fn err(&self, ops: f64) -> f64 {
        self.abs_sum + (ops * self.terms as f64 + 4.0).log2() - self.prec
    }
}

/// Working precision for the tail of a unimodal series.
///
/// Once the terms fall, a term `d` bits below the largest one only needs `p - d` bits
/// for its rounding error to stay under `2^(peak - p)`; the recurrence variables are
/// re-rounded accordingly. A 32-bit guard covers the error carried along the
/// recurrence.
pub(crate) struct Taper {
    p: u32,
    bits: u32,
    peak: f64,
    last: f64,
}

impl Taper {
    pub fn new(p: u32) -> Taper {
        Taper { p, bits: p, peak: f64::NEG_INFINITY, last: f64::INFINITY }
    }

    /// Feed `log2 |term|`; returns a lower precision when it is worth switching.
    pub fn update(&mut self, a: f64) -> Option<u32> {
        self.peak = self.peak.max(a);
        let falling = a < self.last;
        self.last = a;
        if !falling || !a.is_finite() {
            return None;
        }
        let want = (self.p as f64 - (self.peak - a - 32.0).max(0.0)).max(64.0) as u32;
        // Re-rounding costs a copy; only do it for a real saving.
        if (want as f64) < 0.9 * self.bits as f64 {
            self.bits = want;
            Some(want)
        } else {
            None
        }
    }
}

/// `prod_{k>=0} (1 - a q^{step k})`; stops once factors are within rounding of one.
pub fn poch_inf_numeric<C: ComplexScalar>(a: &Monomial, step: i64, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
    let one = C::one_like(&ctx.q);
    let qs = ctx.qpow(step);
    let mut u = ctx.mono(a);
    let mut prod = one.clone();
    let p = ctx.prec() as f64;
    let (mut quiet, mut k) = (0usize, 0usize);
    let mut last = f64::INFINITY;
    while quiet < 5 {
        prod = prod.mul(&one.sub(&u));
        let ul = u.abs_log2();
        if ul < -p - 32.0 && ul <= last {
            quiet += 1;
        } else {
            quiet = 0;
        }
        last = ul;
        u = u.mul(&qs);
        k += 1;
        if k > ctx.max_terms {
            return Err(Error::NoConvergenceBudget(k));
        }
    }
    let err = prod.abs_log2() + (3.0 * k as f64).log2() - p;
    Ok(Approx::computed(prod, err))
}

/// `sum_k log(1 - a q^{step k})` in double precision; the real part is the log of
/// the magnitude, the imaginary part a phase.
fn poch_inf_log(a: Complex64, q: Complex64, step: i64) -> Complex64 {
    let qs = q.powi(step as i32);
    let mut u = a;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    while quiet < 5 {
        let f = Complex64::new(1.0, 0.0) - u;
        if f.norm() == 0.0 {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        acc += f.ln();
        if u.norm() < 1e-20 {
            quiet += 1;
        }
        u *= qs;
    }
    acc
}

/// `log2` of `sum_n |x|^n |q|^{M n(n-1)/2}` over the terms that matter at `prec` bits,
/// and the number of such terms.
fn theta_sum_mass(lx: f64, lq: f64, m: i64, prec: f64) -> (f64, f64) {
    let lm = m as f64 * lq;
    let f = |n: f64| n * lx + lm * n * (n - 1.0) / 2.0;
    let center = (0.5 - lx / lm).round();
    let peak = f(center);
    let mut mass = f64::NEG_INFINITY;
    let mut count = 0.0;
    for dir in [1.0, -1.0] {
        let mut n = if dir > 0.0 { center } else { center - 1.0 };
        loop {
            let v = f(n);
            if v < peak - prec - 64.0 {
                break;
            }
            mass = log2_add(mass, v);
            count += 1.0;
            n += dir;
        }
    }
    (mass, count)
}

fn theta_sum_numeric<C: ComplexScalar>(t: &ThetaSpec, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
    let x = ctx.mono(&t.x);
    let xi = ctx.mono(&t.x.inv());
    let qm = ctx.qpow(t.base);
    let one = C::one_like(&ctx.q);
    // Forward: t_{n+1} = -t_n x q^{Mn}. Backward: t_{-(n+1)} = -t_{-n} x^{-1} q^{M(n+1)}.
    let p = ctx.prec();
    let mut fwd = SeriesAcc::new(&ctx.q);
    let mut taper = Taper::new(p);
    let mut term = one.clone();
    let (mut u, mut qs) = (x, qm.clone());
    loop {
        if fwd.push(&term) {
            break;
        }
        if let Some(b) = taper.update(term.abs_log2()) {
            (term, u, qs) = (term.with_precision(b), u.with_precision(b), qs.with_precision(b));
        }
        term = term.mul(&u).neg();
        u = u.mul(&qs);
        if fwd.terms > ctx.max_terms {
            return Err(Error::NoConvergenceBudget(fwd.terms));
        }
    }
    let mut bwd = SeriesAcc::new(&ctx.q);
    let mut taper = Taper::new(p);
    let mut w = xi.mul(&qm);
    let mut term = w.neg();
    let mut qs = qm.clone();
    loop {
        if bwd.push(&term) {
            break;
        }
        if let Some(b) = taper.update(term.abs_log2()) {
            (term, w, qs) = (term.with_precision(b), w.with_precision(b), qs.with_precision(b));
        }
        w = w.mul(&qs);
        term = term.mul(&w).neg();
        if bwd.terms > ctx.max_terms {
            return Err(Error::NoConvergenceBudget(bwd.terms));
        }
    }
    let err = log2_add(fwd.err(2.0), bwd.err(2.0));
    Ok(Approx::computed(fwd.sum.add(&bwd.sum), err))
}

fn theta_estimate<C: ComplexScalar>(t: &ThetaSpec, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
    let q = ctx.q64();
    let x = Complex64::new(num_traits::ToPrimitive::to_f64(&t.x.coeff()).unwrap_or(f64::NAN), 0.0) * q.powi(t.x.exponent() as i32);
    let qm = q.powi(t.base as i32);
    let log = poch_inf_log(x, q, t.base) + poch_inf_log(qm / x, q, t.base) + poch_inf_log(qm, q, t.base);
    let mag = log.re / std::f64::consts::LN_2;
    let (mass, count) = theta_sum_mass(x.norm().log2(), q.norm().log2(), t.base, ctx.prec() as f64);
    let err = mass + (2.0 * count + 4.0).log2() - ctx.prec() as f64;
    if mag == f64::NEG_INFINITY {
        return Ok(Approx { v: C::zero_like(&ctx.q), mag, lo: mag, err });
    }
    ctx.theta_loss = ctx.theta_loss.max(err + ctx.prec() as f64 - mag);
    // Double-precision value with the exponent split off, so huge magnitudes survive.
    let whole = mag.floor();
    let unit = Complex64::from_polar((mag - whole).exp2(), log.im);
    let v = C::from_c64_like(unit, &ctx.q).mul(&C::from_i64_like(2, &ctx.q).powi(whole as i64));
    Ok(Approx { v, mag: mag + 1e-6, lo: mag - 1e-6, err })
}

/// `j(x; q^M)` evaluated according to `ctx.mode`; memoized per context.
pub fn theta_numeric<C: ComplexScalar>(t: &ThetaSpec, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
    if let Some(a) = ctx.cached_theta(t) {
        return Ok(a);
    }
    let a = match ctx.mode {
        ThetaMode::Sum => theta_sum_numeric(t, ctx)?,
        ThetaMode::Estimate => theta_estimate(t, ctx)?,
        ThetaMode::Product => {
            let m = t.base;
            let p1 = poch_inf_numeric(&t.x, m, ctx)?;
            let p2 = poch_inf_numeric(&Monomial::q_pow(m).over(&t.x), m, ctx)?;
            let p3 = poch_inf_numeric(&Monomial::q_pow(m), m, ctx)?;
            p1.mul(&p2).mul(&p3)
        }
    };
    ctx.store_theta(t.clone(), a.clone());
    Ok(a)
}

/// `m(x, q^M, z)` from its bilateral sum over the theta value of `j(z; q^M)`.
pub fn appell_numeric<C: ComplexScalar>(spec: &crate::appell::AppellSpec, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
    spec.check()?;
    let m = spec.base;
    let one = C::one_like(&ctx.q);
    let z = ctx.mono(&spec.z);
    let zi = ctx.mono(&spec.z.inv());
    let qm = ctx.qpow(m);
    let qmi = one.div(&qm);
    let xz = ctx.mono(&spec.x.times(&spec.z));
    // Numerators follow the theta recursion in z; denominators use u_r = q^{M(r-1)} x z.
    let p = ctx.prec();
    let mut fwd = SeriesAcc::new(&ctx.q);
    let mut taper = Taper::new(p);
    let mut num = one.clone();
    let mut step = z.clone();
    let mut u = xz.mul(&qmi);
    let (mut qs, mut unit) = (qm.clone(), one.clone());
    loop {
        let term = num.div(&unit.sub(&u));
        if fwd.push(&term) {
            break;
        }
        if let Some(b) = taper.update(term.abs_log2()) {
            (num, step, u) = (num.with_precision(b), step.with_precision(b), u.with_precision(b));
            (qs, unit) = (qs.with_precision(b), unit.with_precision(b));
        }
        num = num.mul(&step).neg();
        step = step.mul(&qs);
        u = u.mul(&qs);
        if fwd.terms > ctx.max_terms {
            return Err(Error::NoConvergenceBudget(fwd.terms));
        }
    }
    let mut bwd = SeriesAcc::new(&ctx.q);
    let mut taper = Taper::new(p);
    let mut w = zi.mul(&qm);
    let mut num = w.neg();
    let mut u = xz.mul(&qmi).mul(&qmi);
    let (mut qs, mut qsi, mut unit) = (qm.clone(), qmi.clone(), one.clone());
    loop {
        let term = num.div(&unit.sub(&u));
        if bwd.push(&term) {
            break;
        }
        if let Some(b) = taper.update(term.abs_log2()) {
            (num, w, u) = (num.with_precision(b), w.with_precision(b), u.with_precision(b));
            (qs, qsi, unit) = (qs.with_precision(b), qsi.with_precision(b), unit.with_precision(b));
        }
        w = w.mul(&qs);
        num = num.mul(&w).neg();
        u = u.mul(&qsi);
        if bwd.terms > ctx.max_terms {
            return Err(Error::NoConvergenceBudget(bwd.terms));
        }
    }
    let s = Approx::computed(fwd.sum.add(&bwd.sum), log2_add(fwd.err(4.0), bwd.err(4.0)));
    let j = theta_numeric(&spec.denominator(), ctx)?;
    s.div(&j)
}

/// The regularized bilateral sum, numerically.
pub fn sumstar_numeric<C: ComplexScalar>(x: &Monomial, base: i64, ctx: &mut NumCtx<C>) -> Result<Approx<C>> {
    if x.negate().on_lattice(base) {
        return Err(Error::PoleAtSummand(format!("1 + x q^{{{base}n}} vanishes for x = {x}")));
    }
    let one = C::one_like(&ctx.q);
    let xv = ctx.mono(x);
    let xi = ctx.mono(&x.inv());
    let qm = ctx.qpow(base);
    let qmi = one.div(&qm);
    let mut total = C::zero_like(&ctx.q);
    let mut err = f64::NEG_INFINITY;
    // n >= 0 and n < 0 separately. For n >= 0, q^{M n(n+1)/2} advances by q^{M(n+1)};
    // for n < 0 it advances by q^{M|n|} toward n - 1.
    for dir in [1i64, -1] {
        let mut acc = SeriesAcc::new(&ctx.q);
        let mut taper = Taper::new(ctx.prec());
        let (mut pw, mut qn) = if dir == 1 { (one.clone(), one.clone()) } else { (one.clone(), qmi.clone()) };
        let (mut up, mut qs, mut qsi) = (qm.clone(), qm.clone(), qmi.clone());
        let (mut unit, mut xv, mut xi) = (one.clone(), xv.clone(), xi.clone());
        loop {
            let den = unit.add(&xv.mul(&qn)).mul(&unit.add(&qn.mul(&xi)));
            if den.abs_log2() == f64::NEG_INFINITY {
                return Err(Error::DivisionByZero);
            }
            let term = pw.div(&den);
            if acc.push(&term) {
                break;
            }
            if let Some(b) = taper.update(term.abs_log2()) {
                (pw, qn, up) = (pw.with_precision(b), qn.with_precision(b), up.with_precision(b));
                (qs, qsi) = (qs.with_precision(b), qsi.with_precision(b));
                (unit, xv, xi) = (unit.with_precision(b), xv.with_precision(b), xi.with_precision(b));
            }
            if dir == 1 {
                qn = qn.mul(&qs);
                pw = pw.mul(&qn);
            } else {
                pw = pw.mul(&up);
                up = up.mul(&qs);
                qn = qn.mul(&qsi);
            }
            if acc.terms > ctx.max_terms {
                return Err(Error::NoConvergenceBudget(acc.terms));
            }
        }
        total = total.add(&acc.sum);
        err = log2_add(err, acc.err(6.0));
    }
    let pref = Approx::rounded(one.add(&xi));
    let s = pref.mul(&Approx::computed(total, err));
    let j = theta_numeric(&ThetaSpec::jbar(0, base), ctx)?;
    s.div(&j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_arithmetic() {
        assert!((log2_add(3.0, 3.0) - 4.0).abs() < 1e-12);
        assert_eq!(log2_add(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log2_sub(4.0, 3.0) - 3.0).abs() < 1e-12);
        assert_eq!(log2_sub(1.0, 1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn division_by_uncertain_value_is_flagged() {
        let a = Approx::rounded(Complex64::new(1.0, 0.0));
        let b = Approx::computed(Complex64::new(1e-3, 0.0), 0.0);
        let d = a.div(&b).unwrap();
        assert_eq!(d.err, f64::INFINITY);
    }

    /// Value of a truncated exact series at a small `q`.
    fn at(series: &crate::QSeries, q: Complex64) -> Complex64 {
        use num_traits::ToPrimitive;
        series.terms().map(|(e, c)| q.powi(e as i32) * c.to_f64().unwrap()).sum()
    }

    #[test]
    fn numeric_values_match_exact_series() {
        use crate::mocklib::{Ctx, SeriesId};
        let c = Ctx::new(1);
        let q = Complex64::new(0.06, 0.03);
        let mut exprs: Vec<(String, crate::expr::Expr)> =
            SeriesId::ALL.iter().map(|id| (id.name().to_string(), id.expr(&c, &Monomial::int(2)))).collect();
        // Both halves of the regularized bilateral sum contribute here.
        exprs.push(("sumstar".into(), c.sumstar(Monomial::int(-2), 1)));
        exprs.push(("sumstar x=3".into(), c.sumstar(Monomial::int(3), 2)));
        for (name, e) in exprs {
            let exact = at(&e.series(60).unwrap(), q);
            for mode in [ThetaMode::Sum, ThetaMode::Product] {
                let v = e.eval_numeric(&mut NumCtx::new(q, mode, 100_000)).unwrap();
                assert!((v.v - exact).norm() < 1e-12 * exact.norm().max(1.0), "{name} {mode:?}: {} vs {exact}", v.v);
            }
        }
    }
}
