//! Named q-hypergeometric series as expression trees.
//!
//! Every builder takes a [`Ctx`], which applies the base substitution `q -> q^M`, and
//! the free parameter already written in the substituted variable. A parameter `w = q`
//! under `M = 2` therefore stands for `w = Q^{1/2}` in the identity's own variable `Q`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{one_plus, Expr};
use crate::hecke::HeckeSpec;
use crate::hypergeo::{poch, EulerSum, Poch};
use crate::qlaurent::{Monomial, QSeries};

use super::Specialization;

/// Builders in base `q^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub m: i64,
}

impl Ctx {
    pub fn new(m: i64) -> Ctx {
        assert!(m >= 1, "base substitution must be positive");
        Ctx { m }
    }

    /// `q^k` in the identity's variable.
    pub fn q(&self, k: i64) -> Monomial {
        Monomial::q_pow(self.m * k)
    }

    /// `-q^k`.
    pub fn nq(&self, k: i64) -> Monomial {
        Monomial::neg_q_pow(self.m * k)
    }

    pub fn qe(&self, k: i64) -> Expr {
        Expr::Mono(self.q(k))
    }

    /// `j(x; q^b)`.
    pub fn j(&self, x: Monomial, b: i64) -> Expr {
        Expr::theta(x, self.m * b)
    }

    /// `J_{a,b}`.
    pub fn jam(&self, a: i64, b: i64) -> Expr {
        self.j(self.q(a), b)
    }

    /// `Jbar_{a,b}`.
    pub fn jbar(&self, a: i64, b: i64) -> Expr {
        self.j(self.nq(a), b)
    }

    /// `J_b = (q^b; q^b)_inf`.
    pub fn jm(&self, b: i64) -> Expr {
        self.jam(b, 3 * b)
    }

    /// `m(x, q^b, z)`.
    pub fn m(&self, x: Monomial, b: i64, z: Monomial) -> Expr {
        Expr::appell(x, self.m * b, z)
    }

    /// `(a; q^step)_{len_n n + len_c}`.
    pub fn poch(&self, a: Monomial, step: i64, len_n: i64, len_c: i64) -> Poch {
        poch(a, step * self.m, len_n, len_c)
    }

    /// `sum_n q^{(quad n^2 + lin n)/div} num / den`.
    pub fn sum(&self, quad: i64, lin: i64, div: i64, num: Vec<Poch>, den: Vec<Poch>) -> EulerSum {
        EulerSum::new(quad * self.m, lin * self.m, div, num, den)
    }

    /// `(a; q^step)_inf`.
    pub fn pinf(&self, a: Monomial, step: i64) -> Expr {
        Expr::PochInf(a, step * self.m)
    }

    /// Regularized bilateral sum in `x`, base `q^b`.
    pub fn sumstar(&self, x: Monomial, b: i64) -> Expr {
        Expr::SumStar(x, self.m * b)
    }

    /// `f_{a,b,c}(x, y, q)`.
    pub fn hecke(&self, a: i64, b: i64, c: i64, x: Monomial, y: Monomial) -> Expr {
        Expr::Hecke(std::sync::Arc::new(HeckeSpec::new(a, b, c, x, y, self.m)))
    }
}

/// `sum_n q^{b n(n+1)} / ((x; q^b)_{n+1} (q^b/x; q^b)_{n+1})`.
pub fn g3(c: &Ctx, x: &Monomial, b: i64) -> Expr {
    let qb = c.q(b);
    Expr::euler(c.sum(b, b, 1, vec![], vec![c.poch(x.clone(), b, 1, 1), c.poch(qb.over(x), b, 1, 1)]))
}

/// `x^{-1} (-1 + sum_n q^{b n^2} / ((x; q^b)_{n+1} (q^b/x; q^b)_n))`, the other
/// definition of `g3`.
pub fn g3_shifted(c: &Ctx, x: &Monomial, b: i64) -> Expr {
    let qb = c.q(b);
    let s = Expr::euler(c.sum(b, 0, 1, vec![], vec![c.poch(x.clone(), b, 1, 1), c.poch(qb.over(x), b, 1, 0)]));
    Expr::Mono(x.inv()) * (s - Expr::int(1))
}

/// `g2(x, q^b) = sum_n q^{b n(n+1)/2} (-q^b; q^b)_n / ((x; q^b)_{n+1} (q^b/x; q^b)_{n+1})`.
pub fn g2(c: &Ctx, x: &Monomial, b: i64) -> Expr {
    let qb = c.q(b);
    Expr::euler(c.sum(
        b,
        b,
        2,
        vec![c.poch(c.nq(b), b, 1, 0)],
        vec![c.poch(x.clone(), b, 1, 1), c.poch(qb.over(x), b, 1, 1)],
    ))
}

/// Tail of the bilateral extension of `g2`: `sum_n q^n (q/x)_n (x)_n / (2 (-q)_n)`.
pub fn g2_tail(c: &Ctx, x: &Monomial) -> Expr {
    Expr::euler(
        c.sum(0, 1, 1, vec![c.poch(c.q(1).over(x), 1, 1, 0), c.poch(x.clone(), 1, 1, 0)], vec![c.poch(c.nq(1), 1, 1, 0)])
            .with_constant(Monomial::constant(crate::qlaurent::rat(1, 2))),
    )
}

/// `(1 + 1/w)` as an expression.
pub fn one_plus_inv(w: &Monomial) -> Expr {
    one_plus(w.inv())
}

/// The fixed catalog of named series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesId {
    F3,
    B3,
    W3,
    ThetaW,
    R,
    U,
    R2,
    U2,
    S1,
    V1,
    S2,
    V2,
    S3,
    V3,
    S4,
    V4,
    G3,
    G2,
    G2Tail,
    B2,
    Phi10,
    Psi10,
}

impl SeriesId {
    pub const ALL: [SeriesId; 22] = [
        SeriesId::F3,
        SeriesId::B3,
        SeriesId::W3,
        SeriesId::ThetaW,
        SeriesId::R,
        SeriesId::U,
        SeriesId::R2,
        SeriesId::U2,
        SeriesId::S1,
        SeriesId::V1,
        SeriesId::S2,
        SeriesId::V2,
        SeriesId::S3,
        SeriesId::V3,
        SeriesId::S4,
        SeriesId::V4,
        SeriesId::G3,
        SeriesId::G2,
        SeriesId::G2Tail,
        SeriesId::B2,
        SeriesId::Phi10,
        SeriesId::Psi10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::F3 => "f3",
            SeriesId::B3 => "b3",
            SeriesId::W3 => "w3",
            SeriesId::ThetaW => "theta_w",
            SeriesId::R => "R",
            SeriesId::U => "U",
            SeriesId::R2 => "R2",
            SeriesId::U2 => "U2",
            SeriesId::S1 => "S1",
            SeriesId::V1 => "V1",
            SeriesId::S2 => "S2",
            SeriesId::V2 => "V2",
            SeriesId::S3 => "S3",
            SeriesId::V3 => "V3",
            SeriesId::S4 => "S4",
            SeriesId::V4 => "V4",
            SeriesId::G3 => "g3",
            SeriesId::G2 => "g2",
            SeriesId::G2Tail => "g2_tail",
            SeriesId::B2 => "B2",
            SeriesId::Phi10 => "phi10",
            SeriesId::Psi10 => "psi10",
        }
    }

    /// Whether the series depends on the free parameter.
    pub fn takes_parameter(self) -> bool {
        !matches!(self, SeriesId::F3 | SeriesId::B3 | SeriesId::W3 | SeriesId::ThetaW | SeriesId::B2 | SeriesId::Phi10 | SeriesId::Psi10)
    }

    /// Expression for the series; `w` is the free parameter where there is one.
    pub fn expr(self, c: &Ctx, w: &Monomial) -> Expr {
        let q = |k| c.q(k);
        let nq = |k| c.nq(k);
        let wi = w.inv();
        match self {
            SeriesId::F3 => Expr::euler(c.sum(1, 0, 1, vec![], vec![c.poch(nq(1), 1, 1, 0), c.poch(nq(1), 1, 1, 0)])),
            SeriesId::B3 => c.jam(1, 2).pow(2) / c.jm(1),
            SeriesId::W3 => Expr::euler(c.sum(2, 2, 1, vec![], vec![c.poch(q(1), 2, 1, 1), c.poch(q(1), 2, 1, 1)])),
            SeriesId::ThetaW => c.jbar(1, 4).pow(2) * c.jbar(2, 4) / (c.jbar(0, 4) * c.jm(2)),
            SeriesId::R => Expr::euler(c.sum(1, 0, 1, vec![], vec![c.poch(w.times(&q(1)), 1, 1, 0), c.poch(q(1).times(&wi), 1, 1, 0)])),
            SeriesId::U => Expr::euler(
                c.sum(0, 1, 1, vec![c.poch(w.times(&q(1)), 1, 1, 0), c.poch(q(1).times(&wi), 1, 1, 0)], vec![]).with_constant(q(1)),
            ),
            SeriesId::R2 => Expr::euler(
                c.sum(2, 2, 1, vec![], vec![c.poch(w.times(&q(1)), 2, 1, 1), c.poch(q(1).times(&wi), 2, 1, 1)]).with_constant(q(1)),
            ),
            SeriesId::U2 => Expr::euler(
                c.sum(0, 2, 1, vec![c.poch(w.times(&q(1)), 2, 1, 0), c.poch(q(1).times(&wi), 2, 1, 0)], vec![]).with_constant(q(1)),
            ),
            SeriesId::S1 => {
                one_plus_inv(w)
                    * Expr::euler(
                        c.sum(1, 2, 1, vec![c.poch(q(1), 2, 1, 0)], vec![c.poch(w.times(&nq(1)), 2, 1, 1), c.poch(nq(1).times(&wi), 2, 1, 1)])
                            .with_ratio(Monomial::int(-1))
                            .with_constant(q(1)),
                    )
            }
            SeriesId::V1 => {
                one_plus_inv(w)
                    * Expr::euler(
                        c.sum(0, 2, 1, vec![c.poch(w.times(&nq(1)), 2, 1, 0), c.poch(nq(1).times(&wi), 2, 1, 0)], vec![c.poch(q(1), 2, 1, 1)])
                            .with_constant(q(1)),
                    )
            }
            SeriesId::S2 => {
                one_plus_inv(w)
                    * Expr::euler(
                        c.sum(0, 1, 1, vec![c.poch(nq(1), 1, 2, 0)], vec![c.poch(w.times(&q(1)), 2, 1, 1), c.poch(q(1).times(&wi), 2, 1, 1)])
                            .with_constant(q(1)),
                    )
            }
            SeriesId::V2 => {
                one_plus_inv(w)
                    * Expr::euler(
                        c.sum(0, 2, 1, vec![c.poch(w.times(&q(1)), 2, 1, 0), c.poch(q(1).times(&wi), 2, 1, 0)], vec![c.poch(nq(1), 1, 2, 1)])
                            .with_constant(q(1)),
                    )
            }
            SeriesId::S3 => Expr::euler(
                c.sum(1, 0, 1, vec![c.poch(q(1), 2, 1, 0)], vec![c.poch(w.negate(), 2, 1, 1), c.poch(nq(2).times(&wi), 2, 1, 0)])
                    .with_ratio(Monomial::int(-1)),
            ),
            SeriesId::V3 => {
                one_plus_inv(w)
                    * Expr::euler(
                        c.sum(0, 2, 1, vec![c.poch(w.times(&nq(2)), 2, 1, 0), c.poch(nq(2).times(&wi), 2, 1, 0)], vec![c.poch(q(1), 2, 1, 1)])
                            .with_constant(q(2)),
                    )
            }
            SeriesId::S4 => c.sumstar(w.clone(), 1),
            SeriesId::V4 => {
                one_plus_inv(w)
                    * Expr::euler(
                        c.sum(0, 1, 1, vec![c.poch(w.times(&nq(1)), 1, 1, 0), c.poch(nq(1).times(&wi), 1, 1, 0)], vec![c.poch(q(1), 2, 1, 1)])
                            .with_constant(q(1)),
                    )
            }
            SeriesId::G3 => g3_shifted(c, w, 1),
            SeriesId::G2 => g2(c, w, 1),
            SeriesId::G2Tail => g2_tail(c, w),
            SeriesId::B2 => Expr::euler(c.sum(0, 1, 1, vec![c.poch(nq(1), 2, 1, 0)], vec![c.poch(q(1), 2, 1, 1)])),
            SeriesId::Phi10 => Expr::euler(c.sum(1, 1, 2, vec![], vec![c.poch(q(1), 2, 1, 1)])),
            SeriesId::Psi10 => Expr::euler(c.sum(1, 3, 2, vec![], vec![c.poch(q(1), 2, 1, 1)]).with_constant(q(1))),
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesId {
    type Err = Error;
    fn from_str(s: &str) -> Result<SeriesId> {
        SeriesId::ALL.into_iter().find(|id| id.name().eq_ignore_ascii_case(s)).ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// Exact expansion of a catalog series at a specialization, known below `trunc`
/// (in the substituted variable).
pub fn build_series(id: SeriesId, spec: &Specialization, trunc: i64) -> Result<QSeries> {
    id.expr(&Ctx::new(spec.base), &spec.x).series(trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::{rat, Sign};
    use num_traits::{One, Zero};

    /// `f(q) = sum q^{n^2} / (-q;q)_n^2` by direct truncated products over the rationals.
    fn f3_oracle(order: i64) -> Vec<crate::Rational> {
        let mut out = vec![crate::Rational::zero(); order as usize];
        for n in 0..order {
            if n * n >= order {
                break;
            }
            // 1 / prod (1 + q^i)^2 as a power series.
            let mut s = vec![crate::Rational::zero(); order as usize];
            s[0] = crate::Rational::one();
            for i in 1..=n {
                for _ in 0..2 {
                    for e in (i as usize)..(order as usize) {
                        let prev = s[e - i as usize].clone();
                        s[e] -= prev;
                    }
                }
            }
            for e in 0..(order - n * n) as usize {
                out[e + (n * n) as usize] += &s[e];
            }
        }
        out
    }

    #[test]
    fn f3_matches_product_oracle() {
        let s = build_series(SeriesId::F3, &Specialization::fixed(), 30).unwrap();
        let oracle = f3_oracle(30);
        for (e, c) in oracle.iter().enumerate() {
            assert_eq!(&s.coefficient(e as i64).unwrap(), c, "q^{e}");
        }
        assert_eq!(s.coefficient(2).unwrap(), rat(-2, 1));
    }

    #[test]
    fn parse_ids() {
        for id in SeriesId::ALL {
            assert_eq!(id.name().parse::<SeriesId>().unwrap(), id);
        }
        assert!("nope".parse::<SeriesId>().is_err());
    }

    #[test]
    fn g3_definitions_agree() {
        let c = Ctx::new(1);
        for x in [Monomial::neg_q_pow(1), Monomial::int(2), Monomial::new(Sign::Plus, rat(3, 2), -3)] {
            let a = g3(&c, &x, 1).series(30).unwrap();
            let b = g3_shifted(&c, &x, 1).series(30).unwrap();
            assert_eq!(a.first_mismatch(&b), None, "x = {x}");
        }
    }
}
