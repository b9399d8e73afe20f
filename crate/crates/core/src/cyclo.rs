//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`, and the finite sums that the
//! radial limits converge to.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlaurent::Rational;
use crate::radial::bigcomplex::BigComplex;
use crate::scalar::ComplexScalar;

/// `Phi_n` with integer coefficients, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomials are indexed from 1");
    // x^n - 1, then divide out every proper divisor's factor.
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        p = div_monic(&p, &cyclotomic_poly_cached(d));
    }
    p
}

fn cyclotomic_poly_cached(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(cyclotomic_poly(n));
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Exact quotient by a monic divisor; the remainder must vanish.
fn div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

fn phi_rational(n: u64) -> Arc<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p: Arc<Vec<Rational>> = Arc::new(cyclotomic_poly_cached(n).iter().map(|c| Rational::from_integer(c.clone())).collect());
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Remainder of `a` modulo the monic `m`.
fn rem_monic(mut a: Vec<Rational>, m: &[Rational]) -> Vec<Rational> {
    let dm = m.len() - 1;
    trim(&mut a);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = a[top].clone();
        for (j, mj) in m.iter().enumerate() {
            a[top - dm + j] -= &c * mj;
        }
        trim(&mut a);
    }
    a
}

/// Quotient and remainder for a nonzero (not necessarily monic) divisor.
fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[top - db + j] -= &c * bj;
        }
        q[top - db] = c;
        trim(&mut r);
    }
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// An element of `Q(zeta_n)`: a polynomial in `zeta` of degree below `phi(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    // Trailing zeros are trimmed, so equality is coefficientwise.
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    fn reduced(order: u64, coeffs: Vec<Rational>) -> CyclotomicNumber {
        CyclotomicNumber { order, coeffs: rem_monic(coeffs, &phi_rational(order)) }
    }

    /// Any polynomial in `zeta`, reduced.
    pub fn from_poly(order: u64, coeffs: Vec<Rational>) -> CyclotomicNumber {
        assert!(order >= 1);
        CyclotomicNumber::reduced(order, coeffs)
    }

    pub fn from_rational(order: u64, r: Rational) -> CyclotomicNumber {
        CyclotomicNumber::from_poly(order, vec![r])
    }

    pub fn from_int(order: u64, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(order, Rational::from_integer(k.into()))
    }

    pub fn zero(order: u64) -> CyclotomicNumber {
        CyclotomicNumber { order, coeffs: vec![] }
    }

    pub fn one(order: u64) -> CyclotomicNumber {
        CyclotomicNumber::from_int(order, 1)
    }

    /// `zeta^j`; the exponent is reduced mod `n` first.
    pub fn zeta_pow(order: u64, j: i64) -> CyclotomicNumber {
        let e = j.rem_euclid(order as i64) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        CyclotomicNumber::reduced(order, c)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of `1, zeta, zeta^2, ...`, padded to length `phi(n)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        let deg = phi_rational(self.order).len() - 1;
        let mut c = self.coeffs.clone();
        c.resize(deg, Rational::zero());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn same_field(&self, o: &CyclotomicNumber) -> Result<()> {
        if self.order == o.order {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.order, o.order))
        }
    }

    pub fn add(&self, o: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        self.same_field(o)?;
        Ok(CyclotomicNumber::reduced(self.order, poly_sub(&self.coeffs, &o.neg().coeffs)))
    }

    pub fn sub(&self, o: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        self.same_field(o)?;
        Ok(CyclotomicNumber::reduced(self.order, poly_sub(&self.coeffs, &o.coeffs)))
    }

    pub fn neg(&self) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        self.same_field(o)?;
        Ok(CyclotomicNumber::reduced(self.order, poly_mul(&self.coeffs, &o.coeffs)))
    }

    pub fn scale(&self, r: &Rational) -> CyclotomicNumber {
        CyclotomicNumber::reduced(self.order, self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Inverse by the extended Euclidean algorithm against `Phi_n`.
    pub fn inv(&self) -> Result<CyclotomicNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = phi_rational(self.order);
        // Invariant: s_i * self = r_i (mod Phi_n).
        let (mut r0, mut r1) = (m.to_vec(), self.coeffs.clone());
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (vec![], vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Phi_n is irreducible, so the last nonzero remainder is a constant.
        if r1.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let c = r1[0].recip();
        Ok(CyclotomicNumber::reduced(self.order, s1.into_iter().map(|x| x * &c).collect()))
    }

    pub fn div(&self, o: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<CyclotomicNumber> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CyclotomicNumber::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Image under `zeta -> zeta^{-1}`, which is complex conjugation in every embedding.
    pub fn conj(&self) -> CyclotomicNumber {
        let n = self.order as usize;
        let mut c = vec![Rational::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[(n - i) % n] += x;
        }
        CyclotomicNumber::reduced(self.order, c)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, a) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{a}*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// `prod_{i<count} (1 - s zeta^{arg + i step})` in `Q(zeta_n)`, with `s = -1` when
/// `negated` (so `(-zeta; zeta)_n` is `poch_at_root(true, 1, 1, n, order)`).
pub fn poch_at_root(negated: bool, arg_power: i64, step_power: i64, count: u64, n: u64) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::one(n);
    let one = CyclotomicNumber::one(n);
    for i in 0..count as i64 {
        let z = CyclotomicNumber::zeta_pow(n, arg_power + i * step_power);
        let f = if negated { one.add(&z) } else { one.sub(&z) }.expect("same field");
        acc = acc.mul(&f).expect("same field");
    }
    acc
}

/// The eight radial-limit statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RadialTheorem {
    /// Third-order `f(q)` against `b(q)`, even order `2k`.
    For,
    /// Third-order `w(q)`, odd order `2k+1`.
    W3,
    /// `S_1(1; q)`, order `2k` with `k` odd.
    Ex1,
    /// `S_2(1; q)`, odd order `2k+1`.
    Ex2,
    /// `S_3(1; q)`, order `4k`.
    Ex3,
    /// `S_4(1; q)`, even order `2k`.
    Ex4,
    /// Second-order `B_2(q)`, odd order `2k+1`.
    B2,
    /// Tenth-order `psi(q)`, order `10k + l` with odd `l`.
    Psi10,
}

/// Which reading of the `l = 3` branch of the tenth-order sum to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum F3Variant {
    /// `(zeta; zeta^2)_n (zeta^4; zeta^5)_n`, as printed.
    Paper,
    /// `(zeta; zeta^5)_n (zeta^4; zeta^5)_n`, matching the other branches. The radial
    /// limit at order 13 agrees with this reading only.
    #[default]
    Corrected,
}

impl fmt::Display for F3Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            F3Variant::Paper => "paper",
            F3Variant::Corrected => "corrected",
        })
    }
}

impl FromStr for F3Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<F3Variant> {
        match s {
            "paper" => Ok(F3Variant::Paper),
            "corrected" => Ok(F3Variant::Corrected),
            _ => Err(Error::InvalidArgument(format!("unknown f3 variant {s:?}"))),
        }
    }
}

impl RadialTheorem {
    pub const ALL: [RadialTheorem; 8] = [
        RadialTheorem::For,
        RadialTheorem::W3,
        RadialTheorem::Ex1,
        RadialTheorem::Ex2,
        RadialTheorem::Ex3,
        RadialTheorem::Ex4,
        RadialTheorem::B2,
        RadialTheorem::Psi10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RadialTheorem::For => "FOR",
            RadialTheorem::W3 => "W3",
            RadialTheorem::Ex1 => "EX1",
            RadialTheorem::Ex2 => "EX2",
            RadialTheorem::Ex3 => "EX3",
            RadialTheorem::Ex4 => "EX4",
            RadialTheorem::B2 => "B2",
            RadialTheorem::Psi10 => "PSI10",
        }
    }

    /// The order condition in words.
    pub fn requirement(self) -> &'static str {
        match self {
            RadialTheorem::For => "order 2k with k >= 1",
            RadialTheorem::W3 => "order 2k+1",
            RadialTheorem::Ex1 => "order 2k with k odd",
            RadialTheorem::Ex2 => "order 2k+1",
            RadialTheorem::Ex3 => "order 4k with k >= 1",
            RadialTheorem::Ex4 => "order 2k with k >= 1",
            RadialTheorem::B2 => "order 2k+1",
            RadialTheorem::Psi10 => "order 10k+l with l in {1,3,5,7,9}",
        }
    }

    /// The two smallest admissible `(k, l)`.
    pub fn smallest_params(self) -> [(u64, Option<u64>); 2] {
        match self {
            RadialTheorem::For | RadialTheorem::Ex3 | RadialTheorem::Ex4 => [(1, None), (2, None)],
            RadialTheorem::Ex1 => [(1, None), (3, None)],
            RadialTheorem::W3 | RadialTheorem::Ex2 | RadialTheorem::B2 => [(0, None), (1, None)],
            RadialTheorem::Psi10 => [(0, Some(1)), (0, Some(3))],
        }
    }

    /// Order of the root of unity, or `InadmissibleOrder`.
    pub fn order(self, k: u64, ell: Option<u64>) -> Result<u64> {
        let bad = || Error::InadmissibleOrder { theorem: self.name().into(), requirement: self.requirement().into() };
        if self != RadialTheorem::Psi10 && ell.is_some() {
            return Err(Error::InvalidArgument(format!("{} takes no l parameter", self.name())));
        }
        let n = match self {
            RadialTheorem::For | RadialTheorem::Ex4 if k >= 1 => 2 * k,
            RadialTheorem::Ex1 if k % 2 == 1 => 2 * k,
            RadialTheorem::W3 | RadialTheorem::Ex2 | RadialTheorem::B2 => 2 * k + 1,
            RadialTheorem::Ex3 if k >= 1 => 4 * k,
            RadialTheorem::Psi10 => match ell {
                Some(l @ (1 | 3 | 5 | 7 | 9)) => 10 * k + l,
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        Ok(n)
    }
}

impl fmt::Display for RadialTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RadialTheorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<RadialTheorem> {
        RadialTheorem::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s)).ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// Exact right side of a radial-limit statement at `zeta = e^{2 pi i/n}`.
pub fn rhs_finite_sum(theorem: RadialTheorem, k: u64, ell: Option<u64>, variant: F3Variant) -> Result<CyclotomicNumber> {
    let n = theorem.order(k, ell)?;
    let z = |j: i64| CyclotomicNumber::zeta_pow(n, j);
    let p = |neg: bool, a: i64, s: i64, c: i64| poch_at_root(neg, a, s, c as u64, n);
    let rat = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let sum = |range: std::ops::RangeInclusive<i64>, term: &dyn Fn(i64) -> Result<CyclotomicNumber>| -> Result<CyclotomicNumber> {
        let mut acc = CyclotomicNumber::zero(n);
        for i in range {
            acc = acc.add(&term(i)?)?;
        }
        Ok(acc)
    };
    let k = k as i64;
    let value = match theorem {
        RadialTheorem::For => sum(0..=k - 1, &|i| p(true, 1, 1, i).pow(2)?.mul(&z(i + 1)))?.scale(&rat(-4, 1)),
        RadialTheorem::W3 => sum(0..=k, &|i| p(false, 1, 2, i).pow(2)?.mul(&z(2 * i + 1)))?.neg(),
        RadialTheorem::Ex1 => sum(0..=(k - 1) / 2, &|i| z(2 * i + 1).mul(&p(true, 1, 2, i).pow(2)?)?.div(&p(false, 1, 2, i + 1)))?.scale(&rat(-2, 1)),
        RadialTheorem::Ex2 => sum(0..=k, &|i| p(false, 1, 2, i).pow(2)?.mul(&z(2 * i + 1))?.div(&p(true, 1, 1, 2 * i + 1)))?.scale(&rat(-2, 1)),
        RadialTheorem::Ex3 => sum(0..=k - 1, &|i| z(2 * i + 2).mul(&p(true, 2, 2, i).pow(2)?)?.div(&p(false, 1, 2, i + 1)))?.scale(&rat(-2, 1)),
        RadialTheorem::Ex4 => sum(0..=k - 1, &|i| z(i + 1).mul(&p(true, 1, 1, i).pow(2)?)?.div(&p(false, 1, 2, i + 1)))?.scale(&rat(-2, 1)),
        RadialTheorem::B2 => sum(0..=k, &|i| z(2 * i).mul(&p(false, 1, 2, i).pow(2)?)?.div(&p(true, 2, 2, i)))?.scale(&rat(-1, 2)),
        RadialTheorem::Psi10 => {
            let ell = ell.expect("checked by order()");
            // zeta^{5i} (zeta; zeta^5)_i (zeta^4; zeta^5)_i / (-zeta^5; zeta^5)_i
            let first_step = if ell == 3 && variant == F3Variant::Paper { 2 } else { 5 };
            let term = |i: i64| z(5 * i).mul(&p(false, 1, first_step, i))?.mul(&p(false, 4, 5, i))?.div(&p(true, 5, 5, i));
            let f = match ell {
                1 => sum(0..=2 * k, &term)?,
                3 => sum(0..=4 * k + 1, &term)?,
                5 => {
                    let m = 2 * k + 1;
                    let ratio = p(false, 1, 5, m).mul(&p(false, 4, 5, m))?.div(&p(true, 5, 5, m))?;
                    sum(0..=2 * k, &term)?.div(&CyclotomicNumber::one(n).sub(&ratio)?)?
                }
                7 => sum(0..=4 * k + 2, &term)?,
                _ => sum(0..=2 * k + 1, &term)?,
            };
            z(1).mul(&f)?.neg()
        }
    };
    Ok(value)
}

/// Value of `a` at `zeta = e^{2 pi i j / n}` to about `prec` bits.
pub fn embed_numeric(a: &CyclotomicNumber, root_index: u64, prec: u32) -> Result<BigComplex> {
    let n = a.order();
    if num_integer::gcd(root_index, n) != 1 {
        return Err(Error::InvalidArgument(format!("root index {root_index} is not coprime to {n}")));
    }
    let work = prec + 32 + (a.coeffs.len() as f64).log2().ceil() as u32;
    let z = BigComplex::root_of_unity(root_index % n, n, work);
    let mut acc = BigComplex::real(Float::with_val(work, 0));
    // Horner from the top coefficient.
    for c in a.coeffs.iter().rev() {
        let cv = BigComplex::from_rational_like(c, &z);
        acc = acc.mul(&z).add(&cv);
    }
    Ok(acc.with_precision(prec))
}

/// `f64` approximation, for reports.
pub fn embed_f64(a: &CyclotomicNumber, root_index: u64) -> Result<(f64, f64)> {
    let v = embed_numeric(a, root_index, 64)?.to_c64();
    Ok((v.re, v.im))
}

/// Euler's phi, via the degree of `Phi_n`.
pub fn totient(n: u64) -> u64 {
    (cyclotomic_poly_cached(n).len() - 1).to_u64().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        // First n with a coefficient outside {-1, 0, 1}.
        assert!(cyclotomic_poly(105).iter().any(|c| c.abs() == BigInt::from(2)));
    }

    #[test]
    fn product_over_divisors_is_x_n_minus_1() {
        for n in 1..=60u64 {
            let mut acc = vec![Rational::one()];
            for d in (1..=n).filter(|d| n % d == 0) {
                let phi: Vec<Rational> = cyclotomic_poly(d).into_iter().map(Rational::from_integer).collect();
                acc = poly_mul(&acc, &phi);
            }
            let mut expect = vec![Rational::zero(); n as usize + 1];
            expect[0] = -Rational::one();
            expect[n as usize] = Rational::one();
            assert_eq!(acc, expect, "n = {n}");
        }
    }

    #[test]
    fn zeta_has_exact_order() {
        let n = 12;
        assert_eq!(CyclotomicNumber::zeta_pow(n, 12), CyclotomicNumber::one(n));
        for d in 1..12 {
            assert_ne!(CyclotomicNumber::zeta_pow(n, d), CyclotomicNumber::one(n));
        }
        let mut s = CyclotomicNumber::zero(7);
        for j in 0..7 {
            s = s.add(&CyclotomicNumber::zeta_pow(7, j)).unwrap();
        }
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_one_plus_zeta() {
        let a = CyclotomicNumber::one(5).add(&CyclotomicNumber::zeta_pow(5, 1)).unwrap();
        assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), CyclotomicNumber::one(5));
        assert_eq!(CyclotomicNumber::zero(5).inv(), Err(Error::DivisionByZero));
        // 1 - zeta^n is zero in the field.
        assert!(CyclotomicNumber::one(6).sub(&CyclotomicNumber::zeta_pow(6, 6)).unwrap().is_zero());
    }

    fn random_element(rng: &mut impl Rng, n: u64) -> CyclotomicNumber {
        let deg = totient(n) as usize;
        let c = (0..deg).map(|_| Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())).collect();
        CyclotomicNumber::from_poly(n, c)
    }

    #[test]
    fn random_inverses() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut done = 0;
        while done < 100 {
            let n = rng.gen_range(1..=30);
            let a = random_element(&mut rng, n);
            if a.is_zero() {
                continue;
            }
            assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), CyclotomicNumber::one(n));
            done += 1;
        }
    }

    #[test]
    fn pochhammer_at_roots() {
        // (zeta; zeta^2)_1 at zeta = -1.
        assert_eq!(poch_at_root(false, 1, 2, 1, 2), CyclotomicNumber::from_int(2, 2));
        // (-zeta; zeta)_3 at a primitive cube root: 2 (1 + zeta)(1 + zeta^2) = 2.
        assert_eq!(poch_at_root(true, 1, 1, 3, 3), CyclotomicNumber::from_int(3, 2));
        assert_eq!(poch_at_root(true, 1, 1, 0, 9), CyclotomicNumber::one(9));
    }

    #[test]
    fn spot_values_by_hand() {
        let r = |t, k, l| rhs_finite_sum(t, k, l, F3Variant::Paper).unwrap().as_rational().unwrap();
        assert_eq!(r(RadialTheorem::For, 1, None), Rational::from_integer(4.into()));
        assert_eq!(r(RadialTheorem::W3, 0, None), Rational::from_integer((-1).into()));
        assert_eq!(r(RadialTheorem::Ex1, 1, None), Rational::from_integer(1.into()));
        assert_eq!(r(RadialTheorem::B2, 0, None), Rational::new((-1).into(), 2.into()));
        // EX2 at zeta = 1: -2 * 1 / (1 + 1).
        assert_eq!(r(RadialTheorem::Ex2, 0, None), Rational::from_integer((-1).into()));
    }

    #[test]
    fn admissibility() {
        assert!(matches!(RadialTheorem::Ex1.order(2, None), Err(Error::InadmissibleOrder { .. })));
        assert!(matches!(RadialTheorem::Psi10.order(0, Some(4)), Err(Error::InadmissibleOrder { .. })));
        assert_eq!(RadialTheorem::Ex3.order(2, None).unwrap(), 8);
        assert_eq!(RadialTheorem::Psi10.order(1, Some(3)).unwrap(), 13);
        // The l = 5 branch divides in the field.
        assert!(rhs_finite_sum(RadialTheorem::Psi10, 0, Some(5), F3Variant::Paper).is_ok());
    }

    #[test]
    fn f3_readings_split_at_order_13() {
        let at = |k, v| rhs_finite_sum(RadialTheorem::Psi10, k, Some(3), v).unwrap();
        // zeta^5 = zeta^2 when the order is 3.
        assert_eq!(at(0, F3Variant::Paper), at(0, F3Variant::Corrected));
        assert_ne!(at(1, F3Variant::Paper), at(1, F3Variant::Corrected));
        assert_eq!(at(1, F3Variant::Corrected).to_string(), "-2 + 2*z^1 - 2*z^2 - 2*z^3 + 2*z^6 + z^8");
    }

    #[test]
    fn embedding() {
        let i = embed_numeric(&CyclotomicNumber::zeta_pow(4, 1), 1, 128).unwrap();
        let target = BigComplex::from_f64(0.0, 1.0, 128);
        assert!(i.sub(&target).abs_log2() < -120.0);
        let mut s = CyclotomicNumber::zero(7);
        for j in 0..7 {
            s = s.add(&CyclotomicNumber::zeta_pow(7, j)).unwrap();
        }
        assert!(embed_numeric(&s, 3, 128).unwrap().abs_log2() < -120.0);
        assert!(embed_numeric(&s, 7, 128).is_err());
    }

    #[test]
    fn embedding_is_multiplicative_and_conjugation_commutes() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(3..=24u64);
            let j = (1..n).find(|j| num_integer::gcd(*j, n) == 1 && rng.gen_bool(0.5)).unwrap_or(1);
            let (a, b) = (random_element(&mut rng, n), random_element(&mut rng, n));
            let ab = embed_numeric(&a.mul(&b).unwrap(), j, 200).unwrap();
            let prod = embed_numeric(&a, j, 200).unwrap().mul(&embed_numeric(&b, j, 200).unwrap());
            assert!(ab.sub(&prod).abs_log2() < -150.0);
            let c = embed_numeric(&a.conj(), j, 200).unwrap();
            assert!(c.sub(&embed_numeric(&a, j, 200).unwrap().conj()).abs_log2() < -150.0);
        }
    }
}
