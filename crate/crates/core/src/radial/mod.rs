//! Radial limits toward roots of unity.
//!
//! The left side of each statement is an [`Expr`] evaluated at `q = t zeta` with MPFR
//! arithmetic. Working precision is planned per sample: a cheap pass at 64 bits with
//! [`ThetaMode::Estimate`] measures how many bits the sums lose to cancellation, and
//! the real pass runs at that many bits plus the target.

pub mod bigcomplex;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::cyclo::{embed_numeric, rhs_finite_sum, CyclotomicNumber, F3Variant, RadialTheorem};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::mocklib::catalog::{Ctx, SeriesId};
use crate::numeric::{Approx, NumCtx, ThetaMode};
use crate::qlaurent::Monomial;
use crate::scalar::ComplexScalar;

pub use bigcomplex::BigComplex;

/// The left side of one radial statement.
pub struct RadialSpec {
    pub theorem: RadialTheorem,
    /// Plain-text formula of the left side.
    pub lhs: &'static str,
    /// Notes on how the series is evaluated numerically.
    pub evaluation: &'static str,
}

impl RadialSpec {
    pub fn get(theorem: RadialTheorem) -> RadialSpec {
        let (lhs, evaluation) = match theorem {
            RadialTheorem::For => ("f(q) - (-1)^k J_{1,2}^2/J_1", "f from its Eulerian sum"),
            RadialTheorem::W3 => ("q w(q) - Jbar_{1,4}^2 Jbar_{2,4} / (Jbar_{0,4} J_2)", "w from its Eulerian sum"),
            RadialTheorem::Ex1 => ("S_1(1;q) + J_{1,2}^2/Jbar_{0,1}", "S_1 from its Eulerian sum"),
            RadialTheorem::Ex2 => (
                "2 S_2(1;q) - Jbar_{1,2}^3/(2 J_{1,4}^2)",
                "S_2(1;q) as -m(1,q^2,q); its Eulerian sum has only linear decay",
            ),
            RadialTheorem::Ex3 => ("S_3(1;q) - J_{1,2}^2/Jbar_{0,1}", "S_3 from its Eulerian sum"),
            RadialTheorem::Ex4 => (
                "S_4(1;q) + J_1^3/Jbar_{0,1}^2 - Jbar_{1,2}^4/(2 J_1^3)",
                "S_4 from the regularized bilateral sum",
            ),
            RadialTheorem::B2 => (
                "B_2(q) - J_4^5/J_2^4 - q^{-1} J_4^17/(4 J_2^8 J_8^8) + q^{-1} J_4 J_1^4/(4 J_2^2 J_8^2)",
                "B_2 from its quadratic Eulerian sum",
            ),
            RadialTheorem::Psi10 => (
                "psi(q) + q J_10^2 Jbar_{1,5}/(J_5 J_{4,10}) - 2q J_10^4/(J_5^2 J_{2,10}) \
                 - J_10^10 Jbar_{2,10}/(J_5^4 J_20^4 J_{2,10} Jbar_{7,10}) + J_{10,20}^2 J_{1,5}/(Jbar_{1,5} Jbar_{7,10})",
                "psi from its Eulerian sum",
            ),
        };
        RadialSpec { theorem, lhs, evaluation }
    }

    /// The left side as an expression in `q`.
    pub fn lhs_expr(&self, k: u64) -> Expr {
        let c = Ctx::new(1);
        let one = Monomial::one();
        let s = |id: SeriesId| id.expr(&c, &one);
        let quarter_over_q = || Expr::mono(Monomial::new(crate::Sign::Plus, crate::qlaurent::rat(1, 4), -1));
        match self.theorem {
            RadialTheorem::For => {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                s(SeriesId::F3) - Expr::int(sign) * s(SeriesId::B3)
            }
            RadialTheorem::W3 => c.qe(1) * s(SeriesId::W3) - s(SeriesId::ThetaW),
            RadialTheorem::Ex1 => s(SeriesId::S1) + c.jam(1, 2).pow(2) / c.jbar(0, 1),
            RadialTheorem::Ex2 => {
                Expr::int(-2) * c.m(one.clone(), 2, c.q(1)) - c.jbar(1, 2).pow(3) / (Expr::int(2) * c.jam(1, 4).pow(2))
            }
            RadialTheorem::Ex3 => s(SeriesId::S3) - c.jam(1, 2).pow(2) / c.jbar(0, 1),
            RadialTheorem::Ex4 => {
                s(SeriesId::S4) + c.jm(1).pow(3) / c.jbar(0, 1).pow(2) - c.jbar(1, 2).pow(4) / (Expr::int(2) * c.jm(1).pow(3))
            }
            RadialTheorem::B2 => {
                b2_quadratic(&c) - c.jm(4).pow(5) / c.jm(2).pow(4) - quarter_over_q() * c.jm(4).pow(17) / (c.jm(2).pow(8) * c.jm(8).pow(8))
                    + quarter_over_q() * c.jm(4) * c.jm(1).pow(4) / (c.jm(2).pow(2) * c.jm(8).pow(2))
            }
            RadialTheorem::Psi10 => {
                s(SeriesId::Psi10) + c.qe(1) * c.jm(10).pow(2) * c.jbar(1, 5) / (c.jm(5) * c.jam(4, 10))
                    - Expr::int(2) * c.qe(1) * c.jm(10).pow(4) / (c.jm(5).pow(2) * c.jam(2, 10))
                    - c.jm(10).pow(10) * c.jbar(2, 10) / (c.jm(5).pow(4) * c.jm(20).pow(4) * c.jam(2, 10) * c.jbar(7, 10))
                    + c.jam(10, 20).pow(2) * c.jam(1, 5) / (c.jbar(1, 5) * c.jbar(7, 10))
            }
        }
    }
}

/// `sum_n q^{n^2+n} (-q^2;q^2)_n / (q;q^2)_{n+1}^2`, the form of `B_2` whose terms
/// decay quadratically; the defining sum only decays like `q^n`.
pub fn b2_quadratic(c: &Ctx) -> Expr {
    Expr::euler(c.sum(1, 1, 1, vec![c.poch(c.nq(2), 2, 1, 0)], vec![c.poch(c.q(1), 2, 1, 1), c.poch(c.q(1), 2, 1, 1)]))
}

/// Settings for one radial run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialConfig {
    /// Absolute accuracy asked of every sample, in bits.
    pub precision_bits: u32,
    pub tolerance: f64,
    /// Samples at `t = 1 - 2^{-i}` for these `i`, increasing.
    pub schedule: Vec<u32>,
    /// Highest polynomial degree used by the extrapolation.
    pub max_order: usize,
    pub max_terms: usize,
    pub f3_variant: F3Variant,
    /// Evaluate the samples on the rayon pool.
    pub parallel: bool,
}

impl Default for RadialConfig {
    fn default() -> RadialConfig {
        RadialConfig {
            precision_bits: 256,
            tolerance: 1e-4,
            schedule: (4..=14).collect(),
            max_order: 6,
            max_terms: 1_000_000,
            f3_variant: F3Variant::Corrected,
            parallel: false,
        }
    }
}

/// Left side at one point of the radius.
#[derive(Clone, Debug)]
pub struct Sample {
    /// `i` with `t = 1 - 2^{-i}`.
    pub step: u32,
    pub value: BigComplex,
    /// `log2` of the absolute error bound.
    pub err_log2: f64,
    /// Working precision the value was computed at.
    pub bits: u32,
}

#[derive(Clone, Debug)]
pub struct ExtrapolationResult {
    pub limit: BigComplex,
    /// `|difference of the last two extrapolation stages|`.
    pub error: f64,
    pub samples: Vec<Sample>,
}

/// Evaluate `e` at `q = (1 - 2^{-step}) e^{2 pi i j/n}` to absolute error below
/// `2^{-target}`.
pub fn eval_on_radius(e: &Expr, step: u32, j: u64, n: u64, target: u32, max_terms: usize) -> Result<Sample> {
    let point = |prec: u32| {
        let t = Float::with_val(prec, 1) - Float::with_val(prec, Float::i_exp(1, -(step as i32)));
        BigComplex::root_of_unity(j, n, prec).scale(&t)
    };
    // Planning pass. Dividing by a theta value whose sum form loses more bits than the
    // pass carries gives an infinite bound; the pass is then repeated with enough bits
    // for every theta.
    let mut p0 = 64u32;
    let loss = loop {
        let mut ctx = NumCtx::new(point(p0), ThetaMode::Estimate, max_terms);
        let est = e.eval_numeric(&mut ctx)?;
        if est.err.is_finite() {
            break (est.err + p0 as f64).max(0.0);
        }
        if p0 >= 1 << 22 {
            break 0.0;
        }
        p0 = (4 * p0).max(ctx.theta_loss.ceil() as u32 + 96);
    };
    let mut bits = target + loss.ceil() as u32 + 64;
    for _ in 0..8 {
        let mut ctx = NumCtx::new(point(bits), ThetaMode::Sum, max_terms);
        let a: Approx<BigComplex> = e.eval_numeric(&mut ctx)?;
        if a.err <= -(target as f64) {
            return Ok(Sample { step, value: a.v, err_log2: a.err, bits });
        }
        let short = if a.err.is_finite() { (a.err + target as f64).ceil() as u32 } else { bits };
        bits += short + 64;
    }
    Err(Error::InvalidArgument(format!("could not reach {target} bits at t = 1 - 2^-{step}")))
}

/// Neville extrapolation to `h = 0` through `(h_i, y_i)`, returning the full-degree
/// value and the one from the last but one stage.
fn neville(h: &[Float], y: &[BigComplex]) -> (BigComplex, BigComplex) {
    let m = h.len();
    assert!(m >= 2 && y.len() == m);
    let prec = y.iter().map(|v| v.prec()).min().unwrap();
    let hc: Vec<BigComplex> = h.iter().map(|x| BigComplex::real(Float::with_val(prec, x))).collect();
    // p[i] after stage s interpolates points i..=i+s.
    let mut p: Vec<BigComplex> = y.iter().map(|v| v.with_precision(prec)).collect();
    let mut prev = p[m - 1].clone();
    for s in 1..m {
        if s == m - 1 {
            prev = p[1].clone();
        }
        for i in 0..m - s {
            // P = (h_{i+s} P_i - h_i P_{i+1}) / (h_{i+s} - h_i), evaluated at 0.
            let num = hc[i + s].mul(&p[i]).sub(&hc[i].mul(&p[i + 1]));
            p[i] = num.div(&hc[i + s].sub(&hc[i]));
        }
    }
    (p[0].clone(), prev)
}

/// Polynomial extrapolation in `1 - t` through the last `max_order + 1` samples.
pub fn extrapolate(samples: Vec<Sample>, max_order: usize) -> ExtrapolationResult {
    let use_n = samples.len().min(max_order + 1);
    let tail = &samples[samples.len() - use_n..];
    let prec = tail.iter().map(|s| s.bits).min().unwrap_or(64).max(64);
    if use_n < 2 {
        let limit = tail.last().map(|s| s.value.clone()).unwrap_or_else(|| BigComplex::from_f64(0.0, 0.0, prec));
        return ExtrapolationResult { limit, error: f64::INFINITY, samples };
    }
    let h: Vec<Float> = tail.iter().map(|s| Float::with_val(prec, Float::i_exp(1, -(s.step as i32)))).collect();
    let y: Vec<BigComplex> = tail.iter().map(|s| s.value.clone()).collect();
    let (limit, prev) = neville(&h, &y);
    let error = limit.sub(&prev).to_c64().norm();
    ExtrapolationResult { limit, error, samples }
}

/// Outcome of one radial run, in report form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRecord {
    pub theorem: String,
    pub k: u64,
    pub ell: Option<u64>,
    pub root_order: u64,
    pub root_index: u64,
    pub lhs: String,
    pub f3_variant: Option<String>,
    pub precision_bits: u32,
    /// The `t` values, as `1 - 2^{-i}`.
    pub schedule: Vec<f64>,
    /// `(t, re, im)` of the left side.
    pub samples: Vec<(f64, f64, f64)>,
    pub limit: (f64, f64),
    pub error_estimate: f64,
    /// Exact right side in the basis `1, zeta, zeta^2, ...`.
    pub rhs_exact: String,
    pub rhs: (f64, f64),
    pub difference: f64,
    pub tolerance: f64,
    pub max_sample_magnitude: f64,
    pub pass: bool,
}

/// Full radial check: sample, extrapolate, compare with the exact finite sum.
pub fn radial_verify(theorem: RadialTheorem, k: u64, ell: Option<u64>, root_index: u64, cfg: &RadialConfig) -> Result<(RadialRecord, ExtrapolationResult)> {
    let n = theorem.order(k, ell)?;
    if num_integer::gcd(root_index, n) != 1 {
        return Err(Error::InvalidArgument(format!("root index {root_index} is not coprime to the order {n}")));
    }
    if cfg.precision_bits < 64 || cfg.schedule.is_empty() || cfg.schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("need precision >= 64 and an increasing, nonempty schedule".into()));
    }
    let rhs_exact: CyclotomicNumber = rhs_finite_sum(theorem, k, ell, cfg.f3_variant)?;
    let spec = RadialSpec::get(theorem);
    let e = spec.lhs_expr(k);
    let run = |&step: &u32| eval_on_radius(&e, step, root_index, n, cfg.precision_bits, cfg.max_terms);
    let samples: Vec<Sample> = if cfg.parallel {
        cfg.schedule.par_iter().map(run).collect::<Result<_>>()?
    } else {
        cfg.schedule.iter().map(run).collect::<Result<_>>()?
    };
    let ex = extrapolate(samples, cfg.max_order);
    let rhs = embed_numeric(&rhs_exact, root_index, cfg.precision_bits)?;
    let difference = ex.limit.sub(&rhs.with_precision(ex.limit.prec())).to_c64().norm();
    let t_of = |i: u32| 1.0 - (-(i as f64)).exp2();
    let samples_out: Vec<(f64, f64, f64)> = ex
        .samples
        .iter()
        .map(|s| {
            let v = s.value.to_c64();
            (t_of(s.step), v.re, v.im)
        })
        .collect();
    let max_sample_magnitude = samples_out.iter().map(|&(_, re, im)| re.hypot(im)).fold(0.0, f64::max);
    let lim = ex.limit.to_c64();
    let r = rhs.to_c64();
    let record = RadialRecord {
        theorem: theorem.name().into(),
        k,
        ell,
        root_order: n,
        root_index,
        lhs: spec.lhs.into(),
        f3_variant: (theorem == RadialTheorem::Psi10 && ell == Some(3)).then(|| cfg.f3_variant.to_string()),
        precision_bits: cfg.precision_bits,
        schedule: cfg.schedule.iter().map(|&i| t_of(i)).collect(),
        samples: samples_out,
        limit: (lim.re, lim.im),
        error_estimate: ex.error,
        rhs_exact: rhs_exact.to_string(),
        rhs: (r.re, r.im),
        difference,
        tolerance: cfg.tolerance,
        max_sample_magnitude,
        pass: difference <= cfg.tolerance,
    };
    Ok((record, ex))
}
