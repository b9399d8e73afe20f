//! Strongly unimodal sequences by brute force, and the bivariate series they fill.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlaurent::{QSeries, Rational};

/// Which side of the peak counts positively in the rank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankSign {
    /// `#after - #before`.
    #[default]
    RightMinusLeft,
    /// `#before - #after`.
    LeftMinusRight,
}

impl fmt::Display for RankSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankSign::RightMinusLeft => "right-minus-left",
            RankSign::LeftMinusRight => "left-minus-right",
        })
    }
}

impl FromStr for RankSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<RankSign> {
        match s {
            "right-minus-left" => Ok(RankSign::RightMinusLeft),
            "left-minus-right" => Ok(RankSign::LeftMinusRight),
            _ => Err(Error::InvalidArgument(format!("unknown rank sign {s:?}"))),
        }
    }
}

/// `u(m, n)`: strongly unimodal sequences of size `n` and rank `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnimodalCount {
    pub n: u32,
    pub m: i32,
    pub count: u64,
}

/// Every set of distinct parts below `cap` with sum at most `budget`, reported as
/// (sum, number of parts). Parts are chosen largest first.
fn distinct_sets(cap: u32, budget: u32, sum: u32, len: u32, out: &mut Vec<(u32, u32)>) {
    out.push((sum, len));
    for p in (1..cap).rev() {
        if sum + p <= budget {
            distinct_sets(p, budget, sum + p, len + 1, out);
        }
    }
}

/// Exhaustive counts for sizes `1..=n_max`, rank `#after - #before`.
pub fn unimodal_counts(n_max: u32) -> Vec<UnimodalCount> {
    unimodal_counts_with(n_max, RankSign::RightMinusLeft)
}

/// Exhaustive counts for sizes `1..=n_max` under the chosen rank sign. Zero counts
/// are omitted; the result is sorted by `(n, m)`.
pub fn unimodal_counts_with(n_max: u32, sign: RankSign) -> Vec<UnimodalCount> {
    assert!(n_max <= 24, "enumeration is exponential; n_max must be at most 24");
    let mut counts: BTreeMap<(u32, i32), u64> = BTreeMap::new();
    for peak in 1..=n_max {
        let budget = n_max - peak;
        let mut sides = Vec::new();
        distinct_sets(peak, budget, 0, 0, &mut sides);
        // Left and right are independent sets of parts below the peak.
        for &(ls, ll) in &sides {
            for &(rs, rl) in &sides {
                if ls + rs > budget {
                    continue;
                }
                let r = rl as i32 - ll as i32;
                let m = match sign {
                    RankSign::RightMinusLeft => r,
                    RankSign::LeftMinusRight => -r,
                };
                *counts.entry((peak + ls + rs, m)).or_default() += 1;
            }
        }
    }
    counts.into_iter().map(|((n, m), count)| UnimodalCount { n, m, count }).collect()
}

/// Exact polynomial in `omega^{+-1}` and `q`, known for q-exponents below `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePolynomial {
    coeffs: BTreeMap<(i64, i64), Rational>,
    trunc: i64,
}

impl BivariatePolynomial {
    pub fn one(trunc: i64) -> BivariatePolynomial {
        let mut coeffs = BTreeMap::new();
        if trunc > 0 {
            coeffs.insert((0, 0), Rational::one());
        }
        BivariatePolynomial { coeffs, trunc }
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Coefficient of `omega^m q^n`.
    pub fn coefficient(&self, m: i64, n: i64) -> Result<Rational> {
        if n >= self.trunc {
            return Err(Error::BeyondTruncation { exponent: n, trunc: self.trunc });
        }
        Ok(self.coeffs.get(&(m, n)).cloned().unwrap_or_else(Rational::zero))
    }

    /// Nonzero terms as `((omega-exponent, q-exponent), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, key: (i64, i64), c: Rational) {
        if key.1 >= self.trunc || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial { coeffs: self.coeffs.clone(), trunc: self.trunc.min(other.trunc) };
        out.coeffs.retain(|k, _| k.1 < out.trunc);
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial { coeffs: BTreeMap::new(), trunc: self.trunc.min(other.trunc) };
        for (&(a, b), c) in &self.coeffs {
            for (&(x, y), d) in &other.coeffs {
                out.add_term((a + x, b + y), c.clone() * d);
            }
        }
        out
    }

    /// Multiply by `q^k`.
    pub fn shift_q(&self, k: i64) -> BivariatePolynomial {
        let mut out = BivariatePolynomial { coeffs: BTreeMap::new(), trunc: self.trunc };
        for (&(a, b), c) in &self.coeffs {
            out.add_term((a, b + k), c.clone());
        }
        out
    }

    /// Set `omega` to a nonzero rational constant.
    pub fn eval_omega(&self, w: &Rational) -> Result<QSeries> {
        if w.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let len = self.trunc.max(0) as usize;
        let mut acc = vec![Rational::zero(); len];
        for (&(a, b), c) in &self.coeffs {
            acc[b as usize] += c.clone() * pow_rat(w, a);
        }
        QSeries::new(0, self.trunc.max(0), acc)
    }
}

fn pow_rat(w: &Rational, k: i64) -> Rational {
    let mut r = Rational::one();
    let base = if k < 0 { w.recip() } else { w.clone() };
    for _ in 0..k.unsigned_abs() {
        r *= &base;
    }
    r
}

/// `sum_{n>=0} q^{n+1} (omega q; q)_n (q/omega; q)_n` below `q^trunc`.
pub fn build_bivariate_u(trunc: i64) -> BivariatePolynomial {
    bivariate_sum(trunc, -1)
}

/// `sum_{n>=0} q^{n+1} (omega q; q)_n (omega^e q; q)_n`.
fn bivariate_sum(trunc: i64, e: i64) -> BivariatePolynomial {
    assert!(trunc <= 40, "bivariate truncation is capped at 40");
    let mut total = BivariatePolynomial { coeffs: BTreeMap::new(), trunc };
    let mut prod = BivariatePolynomial::one(trunc);
    let mut n = 0i64;
    // The n-th term starts at q^{n+1}.
    while n + 1 < trunc {
        total = total.add(&prod.shift_q(n + 1));
        n += 1;
        // (1 - omega q^n)(1 - omega^e q^n)
        let mut f = BivariatePolynomial::one(trunc);
        f.add_term((1, n), -Rational::one());
        f.add_term((e, n), -Rational::one());
        f.add_term((1 + e, 2 * n), Rational::one());
        prod = prod.mul(&f);
    }
    total
}

/// Whether the coefficient of `omega^m q^n` in the bivariate series is `(-1)^m u(m, n)`
/// for every `n <= n_max`, with ranks counted under `sign`.
pub fn oracle_matches(n_max: u32, sign: RankSign) -> bool {
    let b = build_bivariate_u(n_max as i64 + 1);
    let mut expect: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
    for c in unimodal_counts_with(n_max, sign) {
        let v = Rational::from_integer((c.count as i64).into());
        expect.insert((c.m as i64, c.n as i64), if c.m % 2 == 0 { v } else { -v });
    }
    b.terms().map(|(k, v)| (*k, v.clone())).collect::<BTreeMap<_, _>>() == expect
}
