//! Named series, the identity registry and the verification harness.
//!
//! Each [`IdentityEntry`] holds independent builders for its left side and one or more
//! right sides. Checking an entry expands every side exactly to the requested order and
//! compares coefficients; agreement means every right side equals the left side.

pub mod catalog;
pub mod registry;
pub mod unimodal;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Violation};
use crate::qlaurent::{Monomial, QSeries, Rational, Sign};
use crate::theta::ThetaSpec;

pub use catalog::{build_series, Ctx, SeriesId};
pub use registry::{entry, registry};
pub use unimodal::{build_bivariate_u, oracle_matches, unimodal_counts, unimodal_counts_with, BivariatePolynomial, RankSign, UnimodalCount};

/// Values for the free parameters of an identity, written in the variable obtained
/// after the base substitution `q -> q^base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Specialization {
    /// The main parameter (`w` or `x`).
    pub x: Monomial,
    /// Further parameters, e.g. `z` and `z1` of the Appell-Lerch functional equations.
    pub extra: Vec<Monomial>,
    pub base: i64,
}

impl Specialization {
    pub fn new(x: Monomial, base: i64) -> Specialization {
        assert!(base >= 1, "base substitution must be positive");
        Specialization { x, extra: Vec::new(), base }
    }

    /// Placeholder for statements without free parameters.
    pub fn fixed() -> Specialization {
        Specialization::new(Monomial::one(), 1)
    }

    pub fn with_extra(mut self, extra: Vec<Monomial>) -> Specialization {
        self.extra = extra;
        self
    }

    /// Parameter `i`, where `0` is the main one.
    pub fn param(&self, i: usize) -> &Monomial {
        if i == 0 {
            &self.x
        } else {
            &self.extra[i - 1]
        }
    }

    /// The same point under a further substitution `q -> q^k`.
    pub fn subst(&self, k: i64) -> Specialization {
        Specialization {
            x: self.x.subst(k),
            extra: self.extra.iter().map(|m| m.subst(k)).collect(),
            base: self.base * k,
        }
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}", self.x)?;
        for (i, e) in self.extra.iter().enumerate() {
            write!(f, ", p{} = {e}", i + 1)?;
        }
        write!(f, ", M = {}", self.base)
    }
}

/// What an entry expects of its specialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// The statement fixes every parameter.
    Fixed,
    /// Generic in the named parameters; the first is `Specialization::x`.
    Generic(Vec<&'static str>),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Fixed => write!(f, "fixed"),
            Shape::Generic(p) => write!(f, "generic in {}", p.join(", ")),
        }
    }
}

pub type Builder = fn(&Ctx, &Specialization) -> Expr;
/// Extra admissibility condition beyond vanishing denominators.
pub type Requirement = fn(&Specialization) -> Option<String>;

/// A named identity `lhs = rhs[0] = rhs[1] = ...`.
#[derive(Clone)]
pub struct IdentityEntry {
    pub id: &'static str,
    /// What the identity is, in words.
    pub citation: &'static str,
    /// The identity in plain notation.
    pub statement: &'static str,
    pub shape: Shape,
    pub lhs: Builder,
    pub rhs: Vec<Builder>,
    pub requirement: Option<Requirement>,
    /// Candidate specializations; the admissible ones are checked by default.
    pub candidates: Vec<Specialization>,
    /// Harness self-test: add `c q^e` to the first right side.
    pub perturbation: Option<(i64, Rational)>,
}

impl fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityEntry").field("id", &self.id).field("shape", &self.shape).finish()
    }
}

/// Record returned by every check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub specialization: String,
    /// Order in the identity's own variable.
    pub order: i64,
    pub pass: bool,
    /// Index of the right side that disagreed.
    pub failing_form: Option<usize>,
    /// Exponent in the substituted variable.
    pub first_mismatch: Option<i64>,
    pub lhs_coefficient: Option<String>,
    pub rhs_coefficient: Option<String>,
    pub error: Option<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} [{}] order {}", self.id, self.specialization, self.order)?;
        if let Some(e) = self.first_mismatch {
            write!(
                f,
                ": form {} differs at q^{e} ({} vs {})",
                self.failing_form.unwrap_or(0),
                self.lhs_coefficient.as_deref().unwrap_or("?"),
                self.rhs_coefficient.as_deref().unwrap_or("?")
            )?;
        }
        if let Some(e) = &self.error {
            write!(f, ": {e}")?;
        }
        Ok(())
    }
}

impl IdentityEntry {
    pub fn lhs_expr(&self, spec: &Specialization) -> Expr {
        (self.lhs)(&Ctx::new(spec.base), spec)
    }

    pub fn rhs_exprs(&self, spec: &Specialization) -> Vec<Expr> {
        let c = Ctx::new(spec.base);
        let mut out: Vec<Expr> = self.rhs.iter().map(|b| b(&c, spec)).collect();
        if let Some((e, d)) = &self.perturbation {
            let m = Monomial::new(Sign::Plus, d.clone(), *e);
            out[0] = out[0].clone() + Expr::Mono(m);
        }
        out
    }

    /// Copy whose first right side is off by `c q^e`.
    pub fn perturbed(&self, e: i64, c: Rational) -> IdentityEntry {
        IdentityEntry { perturbation: Some((e, c)), ..self.clone() }
    }

    /// Every vanishing denominator, on either side.
    pub fn genericity_scan(&self, spec: &Specialization) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Some(req) = self.requirement {
            if let Some(msg) = req(spec) {
                out.push(Violation { theta: None, context: msg });
                return out;
            }
        }
        if let Shape::Generic(p) = &self.shape {
            if spec.extra.len() + 1 != p.len() {
                out.push(Violation { theta: None, context: format!("expects parameters {}", p.join(", ")) });
                return out;
            }
        }
        for e in std::iter::once(self.lhs_expr(spec)).chain(self.rhs_exprs(spec)) {
            for v in e.violations() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Every theta that occurs in a denominator at `spec`.
    pub fn manifest(&self, spec: &Specialization) -> Vec<ThetaSpec> {
        let mut out: Vec<ThetaSpec> = Vec::new();
        for e in std::iter::once(self.lhs_expr(spec)).chain(self.rhs_exprs(spec)) {
            for t in e.denominators() {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// The first three candidates that pass the genericity scan.
    pub fn default_specializations(&self) -> Vec<Specialization> {
        self.candidates.iter().filter(|s| self.genericity_scan(s).is_empty()).take(3).cloned().collect()
    }

    pub fn param_count(&self) -> usize {
        match &self.shape {
            Shape::Fixed => 0,
            Shape::Generic(p) => p.len(),
        }
    }

    /// Admissible specializations with parameters in `{+-q^e : |e| <= e_max}` and bases
    /// up to `m_max`, in a fixed order: base, then parameters with exponent ascending
    /// and `+` before `-`.
    pub fn find_admissible_specializations(&self, e_max: i64, m_max: i64) -> Vec<Specialization> {
        let values: Vec<Monomial> =
            (-e_max..=e_max).flat_map(|e| [Monomial::q_pow(e), Monomial::neg_q_pow(e)]).collect();
        let mut out = Vec::new();
        for m in 1..=m_max {
            let k = self.param_count();
            if k == 0 {
                let s = Specialization::new(Monomial::one(), m);
                if self.genericity_scan(&s).is_empty() {
                    out.push(s);
                }
                continue;
            }
            let mut idx = vec![0usize; k];
            loop {
                let s = Specialization::new(values[idx[0]].clone(), m)
                    .with_extra(idx[1..].iter().map(|&i| values[i].clone()).collect());
                if self.genericity_scan(&s).is_empty() {
                    out.push(s);
                }
                // Odometer over the parameter grid, last slot fastest.
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < values.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        out
    }

    /// Compare every side at `spec` up to `order` in the identity's own variable.
    pub fn check(&self, spec: &Specialization, order: i64) -> Result<VerificationReport> {
        let violations = self.genericity_scan(spec);
        if !violations.is_empty() {
            return Err(Error::NonGenericSpecialization(violations.iter().map(|v| v.to_string()).collect()));
        }
        let trunc = order.checked_mul(spec.base).ok_or(Error::OrderOverflow(order))?;
        let lhs = self.lhs_expr(spec).series(trunc)?;
        let mut report = VerificationReport {
            id: self.id.to_string(),
            specialization: spec.to_string(),
            order,
            pass: true,
            failing_form: None,
            first_mismatch: None,
            lhs_coefficient: None,
            rhs_coefficient: None,
            error: None,
            notes: Vec::new(),
        };
        for (i, r) in self.rhs_exprs(spec).iter().enumerate() {
            let rhs = r.series(trunc)?;
            if let Some((e, a, b)) = compare(&lhs, &rhs, trunc) {
                report.pass = false;
                report.failing_form = Some(i);
                report.first_mismatch = Some(e);
                report.lhs_coefficient = Some(a.to_string());
                report.rhs_coefficient = Some(b.to_string());
                break;
            }
        }
        Ok(report)
    }

    /// [`IdentityEntry::check`], with errors folded into a failing report.
    pub fn check_report(&self, spec: &Specialization, order: i64) -> VerificationReport {
        self.check(spec, order).unwrap_or_else(|e| VerificationReport {
            id: self.id.to_string(),
            specialization: spec.to_string(),
            order,
            pass: false,
            failing_form: None,
            first_mismatch: None,
            lhs_coefficient: None,
            rhs_coefficient: None,
            error: Some(e.to_string()),
            notes: Vec::new(),
        })
    }
}

/// First exponent below `trunc` where the series differ.
fn compare(a: &QSeries, b: &QSeries, trunc: i64) -> Option<(i64, Rational, Rational)> {
    let a = a.clone().truncate(trunc);
    let b = b.clone().truncate(trunc);
    a.first_mismatch(&b)
}

/// Check each entry at each of its default specializations, in registry order.
/// `jobs <= 1` runs serially; otherwise entries are spread over a pool of that size.
pub fn run_suite(entries: &[IdentityEntry], order: i64, jobs: usize) -> Vec<VerificationReport> {
    let work: Vec<(&IdentityEntry, Specialization)> =
        entries.iter().flat_map(|e| e.default_specializations().into_iter().map(move |s| (e, s))).collect();
    let run = |(e, s): &(&IdentityEntry, Specialization)| e.check_report(s, order);
    if jobs <= 1 {
        return work.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    // Indexed parallel map keeps the input order.
    pool.install(|| work.par_iter().map(run).collect())
}

/// Check one of the Appell-Lerch functional equations.
pub fn verify_functional_equation(
    id: &str,
    x: Monomial,
    z: Monomial,
    z1: Option<Monomial>,
    base: i64,
    order: i64,
) -> Result<VerificationReport> {
    let e = entry(id)?;
    let mut extra = vec![z];
    extra.extend(z1);
    e.check(&Specialization::new(x, base).with_extra(extra), order)
}

/// Check one of the Eulerian identities for `m(x, q, z)`. When a square root needed by
/// the statement does not exist, the check runs under `q -> q^2` and says so.
pub fn verify_eulerian_identity(id: &str, x: Monomial, base: i64, order: i64) -> Result<VerificationReport> {
    let e = entry(id)?;
    let spec = Specialization::new(x, base);
    if let Some(req) = e.requirement {
        if req(&spec).is_some() {
            let sub = spec.subst(2);
            if req(&sub).is_none() {
                let mut r = e.check(&sub, order)?;
                r.notes.push("checked under q -> q^2 so that the square root is a monomial".into());
                return Ok(r);
            }
        }
    }
    e.check(&spec, order)
}

/// Check the bilateral expansion of `m(a/b, q, -b)` at `a`, `b`.
pub fn verify_bilateral_347(a: Monomial, b: Monomial, order: i64) -> Result<VerificationReport> {
    entry("bilateral-347")?.check(&Specialization::new(a, 1).with_extra(vec![b]), order)
}

/// Check `2 J_2 f(x) = f_{1,3,6}(xq, q^5, q) + q f_{1,3,6}(xq^2, q^7, q)`.
pub fn verify_g2_tail_hecke(x: Monomial, order: i64) -> Result<VerificationReport> {
    entry("hecke-f")?.check(&Specialization::new(x, 1), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::rat;

    #[test]
    fn specialization_display_and_subst() {
        let s = Specialization::new(Monomial::neg_q_pow(1), 1).with_extra(vec![Monomial::q_pow(2)]);
        assert_eq!(s.to_string(), "x = -q, p1 = q^2, M = 1");
        let t = s.subst(3);
        assert_eq!(t.x, Monomial::neg_q_pow(3));
        assert_eq!(t.base, 3);
    }

    #[test]
    fn perturbation_is_reported_at_its_exponent() {
        let e = entry("z-shift").unwrap().perturbed(7, rat(1, 3));
        let spec = e.default_specializations()[0].clone();
        let r = e.check(&spec, 20).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_mismatch, Some(7));
    }

    #[test]
    fn wrong_parameter_count_is_inadmissible() {
        let e = entry("change-z").unwrap();
        assert!(!e.genericity_scan(&Specialization::new(Monomial::q_pow(1), 1)).is_empty());
    }
}
