//! Acceptance run: one line per criterion, then a nonzero exit if any criterion fails
//! for a reason other than a documented defect in a printed identity.
//!
//! The heavy radial work is done once (the serial full report) and reused.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use mockq::cyclo::{cyclotomic_poly, rhs_finite_sum, CyclotomicNumber, F3Variant, RadialTheorem};
use mockq::hecke::{hecke_series, HeckeSpec};
use mockq::mocklib::{
    build_bivariate_u, entry, registry, run_suite, unimodal_counts_with, verify_functional_equation, verify_g2_tail_hecke, RankSign,
    Specialization,
};
use mockq::qlaurent::rat;
use mockq::radial::{radial_verify, RadialConfig, RadialRecord};
use mockq::theta::{jtheta_product, jtheta_sum, ThetaSpec};
use mockq::{Monomial, QSeries, Rational, Sign};
use mockq_cli::{cmd_report_all, radial_cases, report_all_timed, Report, RunConfig};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Registry entries whose printed statements are false; they are kept as printed.
const KNOWN_FALSE: [&str; 2] = ["gm-mixed", "master"];

struct Outcome {
    pass: bool,
    detail: String,
    /// Failure confined to the known-false printed identities.
    known: bool,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), known: false }
}

fn random_monomial(rng: &mut StdRng, e_max: i64) -> Monomial {
    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
    let n = rng.gen_range(1..=5);
    let d = rng.gen_range(1..=5);
    Monomial::new(sign, rat(n, d), rng.gen_range(-e_max..=e_max))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let reports = run_suite(registry(), 40, 1);
    let elapsed = start.elapsed();
    let mut passing: BTreeMap<String, usize> = BTreeMap::new();
    let mut failing: BTreeSet<String> = BTreeSet::new();
    for r in &reports {
        if r.pass {
            *passing.entry(r.id.clone()).or_default() += 1;
        } else {
            failing.insert(r.id.clone());
        }
    }
    let mut short = Vec::new();
    for e in registry() {
        let need = if e.param_count() == 0 { 1 } else { 3 };
        let got = passing.get(e.id).copied().unwrap_or(0);
        if got < need || failing.contains(e.id) {
            short.push(e.id);
        }
    }
    let detail = format!(
        "{} of {} entries pass at every checked specialization, order 40, {:.1}s; failing: {}",
        registry().len() - short.len(),
        registry().len(),
        elapsed.as_secs_f64(),
        if short.is_empty() { "none".to_string() } else { short.join(", ") }
    );
    let pass = short.is_empty() && elapsed < Duration::from_secs(600);
    let known = !pass && elapsed < Duration::from_secs(600) && short.iter().all(|id| KNOWN_FALSE.contains(id));
    Outcome { pass, detail, known }
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut bad = Vec::new();
    let mut count = 0;
    for id in ["z-shift", "x-inverse", "x-shift", "change-z", "z-flip"] {
        let e = entry(id).unwrap();
        let mut done = 0;
        while done < 5 {
            let x = random_monomial(&mut rng, 3);
            let z = random_monomial(&mut rng, 3);
            let z1 = (e.param_count() == 3).then(|| random_monomial(&mut rng, 3));
            let base = rng.gen_range(1..=2);
            let mut extra = vec![z.clone()];
            extra.extend(z1.clone());
            if !e.genericity_scan(&Specialization::new(x.clone(), base).with_extra(extra)).is_empty() {
                continue;
            }
            let r = verify_functional_equation(id, x, z, z1, base, 40).unwrap();
            if !r.pass {
                bad.push(r.to_string());
            }
            done += 1;
            count += 1;
        }
    }
    ok(bad.is_empty(), format!("{count} random generic specializations, order 40; {} failures {bad:?}", bad.len()))
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut bad = 0;
    for _ in 0..50 {
        let spec = ThetaSpec::new(random_monomial(&mut rng, 4), rng.gen_range(1..=4));
        if jtheta_product(&spec, 50).unwrap() != jtheta_sum(&spec, 50).unwrap() {
            bad += 1;
        }
    }
    ok(bad == 0, format!("50 random (x, M), order 50; {bad} disagree"))
}

fn criterion_4() -> Outcome {
    let forms = ["RLN2a", "RLN2b", "RLN2c"].map(|id| entry(id).unwrap());
    // -q/x is a square in each case, so every form applies without substitution.
    let xs = [Monomial::new(Sign::Minus, rat(1, 4), 1), Monomial::new(Sign::Minus, rat(1, 9), 3), Monomial::new(Sign::Minus, rat(4, 1), -1)];
    let mut lines = Vec::new();
    let mut pass = true;
    for x in xs {
        let spec = Specialization::new(x.clone(), 1);
        if forms.iter().any(|e| !e.genericity_scan(&spec).is_empty()) {
            pass = false;
            lines.push(format!("x = {x} not generic"));
            continue;
        }
        let series: Vec<QSeries> = forms.iter().map(|e| e.rhs_exprs(&spec)[0].series(40).unwrap()).collect();
        let lhs = forms[0].lhs_expr(&spec).series(40).unwrap();
        let agree = series.iter().all(|s| s == &series[0]) && series[0] == lhs;
        pass &= agree;
        lines.push(format!("x = {x}: {}", if agree { "agree" } else { "differ" }));
    }
    ok(pass, format!("three forms at order 40: {}", lines.join("; ")))
}

/// `(-1)^m u(m, n)` for `n <= 16` against the bivariate series, for both rank signs.
fn criterion_5(report: &Report) -> Outcome {
    let b = build_bivariate_u(17);
    let mut matching = Vec::new();
    for sign in [RankSign::RightMinusLeft, RankSign::LeftMinusRight] {
        let mut expect: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for c in unimodal_counts_with(16, sign) {
            let v = Rational::from_integer(BigInt::from(c.count));
            expect.insert((c.m as i64, c.n as i64), if c.m % 2 == 0 { v } else { -v });
        }
        let got: BTreeMap<(i64, i64), Rational> = b.terms().map(|(k, v)| (*k, v.clone())).collect();
        if got == expect {
            matching.push(sign.to_string());
        }
    }
    let u = report.unimodal.as_ref().unwrap();
    let pass = !matching.is_empty() && u.pass && u.matching_signs == matching;
    ok(pass, format!("n <= 16, exact; matching rank signs: {}; report ran {}", matching.join(", "), u.rank_sign))
}

/// The defining double sum over a box, written out directly.
fn naive_hecke(a: i64, b: i64, c: i64, x: &Monomial, y: &Monomial, bound: i64, trunc: i64) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for r in -bound..=bound {
        for s in -bound..=bound {
            if (r >= 0) != (s >= 0) {
                continue;
            }
            let e = a * r * (r - 1) / 2 + b * r * s + c * s * (s - 1) / 2 + r * x.exponent() + s * y.exponent();
            if e >= trunc {
                continue;
            }
            let sg = if r >= 0 { 1 } else { -1 };
            let parity = if (r + s).rem_euclid(2) == 0 { 1 } else { -1 };
            let mut coeff = Rational::from_integer(BigInt::from(sg * parity));
            for (m, k) in [(x, r), (y, s)] {
                let base = if m.sign() == Sign::Minus { -m.scalar().clone() } else { m.scalar().clone() };
                let p = if k >= 0 { base.clone() } else { base.recip() };
                for _ in 0..k.abs() {
                    coeff *= &p;
                }
            }
            *out.entry(e).or_insert_with(Rational::zero) += coeff;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for x in [Monomial::int(2), Monomial::new(Sign::Minus, rat(1, 3), 1), Monomial::new(Sign::Plus, rat(3, 2), -1)] {
        let r = verify_g2_tail_hecke(x.clone(), 40).unwrap();
        pass &= r.pass;
        notes.push(format!("x = {x}: {}", if r.pass { "pass" } else { "FAIL" }));
    }
    let cases = [(1, 3, 6, Monomial::q_pow(1), Monomial::q_pow(5)), (1, 3, 6, Monomial::q_pow(2), Monomial::q_pow(7)), (1, 2, 1, Monomial::int(2), Monomial::new(Sign::Minus, rat(1, 3), 1)), (2, 1, 3, Monomial::neg_q_pow(1), Monomial::q_pow(2))];
    let mut oracle_ok = 0;
    for (a, b, c, x, y) in &cases {
        // Every contributing summand below q^30 lies inside |r|, |s| <= 30 for these forms.
        let fast: BTreeMap<i64, Rational> = hecke_series(&HeckeSpec::new(*a, *b, *c, x.clone(), y.clone(), 1), 30)
            .unwrap()
            .terms()
            .map(|(e, v)| (e, v.clone()))
            .collect();
        if fast == naive_hecke(*a, *b, *c, x, y, 30, 30) {
            oracle_ok += 1;
        }
    }
    pass &= oracle_ok == cases.len();
    ok(pass, format!("tail identity at order 40: {}; f_abc against the |r|,|s| <= 30 double loop: {oracle_ok}/{}", notes.join(", "), cases.len()))
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut products_ok = true;
    for n in 1..=60u64 {
        let mut p = vec![BigInt::one()];
        for d in (1..=n).filter(|d| n % d == 0) {
            p = poly_mul(&p, &cyclotomic_poly(d));
        }
        let mut expect = vec![BigInt::zero(); n as usize + 1];
        expect[0] = -BigInt::one();
        expect[n as usize] = BigInt::one();
        products_ok &= p == expect;
    }
    let mut rng = StdRng::seed_from_u64(7);
    let mut inverses = 0;
    let mut tried = 0;
    while tried < 100 {
        let n = rng.gen_range(1..=30u64);
        let deg = mockq::cyclo::totient(n) as usize;
        let coeffs: Vec<Rational> = (0..deg).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        let a = CyclotomicNumber::from_poly(n, coeffs);
        if a.is_zero() {
            continue;
        }
        tried += 1;
        if a.mul(&a.inv().unwrap()).unwrap() == CyclotomicNumber::one(n) {
            inverses += 1;
        }
    }
    ok(products_ok && inverses == 100, format!("divisor products for n <= 60: {}; inverses: {inverses}/100", if products_ok { "exact" } else { "WRONG" }))
}

fn criterion_8(report: &Report, times: &[Duration]) -> Outcome {
    let spot = [
        (RadialTheorem::For, 1, rat(4, 1)),
        (RadialTheorem::W3, 0, rat(-1, 1)),
        (RadialTheorem::Ex1, 1, rat(1, 1)),
        (RadialTheorem::B2, 0, rat(-1, 2)),
    ];
    let spot_ok = spot.iter().all(|(t, k, v)| rhs_finite_sum(*t, *k, None, F3Variant::default()).unwrap().as_rational().as_ref() == Some(v));
    let slowest = times.iter().max().copied().unwrap_or_default();
    let mut worst = 0.0f64;
    for r in &report.radial {
        worst = worst.max(r.difference);
        println!(
            "      {:<5} k={} l={:<4} |limit - exact| = {:.2e}  estimate {:.2e}",
            r.theorem,
            r.k,
            r.ell.map_or("-".into(), |l| l.to_string()),
            r.difference,
            r.error_estimate
        );
    }
    let pass = spot_ok
        && report.radial.len() == 16
        && report.radial_errors.is_empty()
        && report.radial.iter().all(|r| r.pass && r.tolerance <= 1e-4 && r.precision_bits == 256)
        && slowest < Duration::from_secs(300);
    ok(
        pass,
        format!(
            "{}/16 within 1e-4 (worst {:.2e}), slowest run {:.0}s, spot values {}{}",
            report.radial.iter().filter(|r| r.pass).count(),
            worst,
            slowest.as_secs_f64(),
            if spot_ok { "exact" } else { "WRONG" },
            if report.radial_errors.is_empty() { String::new() } else { format!(", errors {:?}", report.radial_errors) }
        ),
    )
}

fn criterion_9(base: &[RadialRecord]) -> Outcome {
    let doubled = RadialConfig { precision_bits: 512, max_terms: 2_000_000, ..RadialConfig::default() };
    let mut moved = Vec::new();
    let mut conj_bad = Vec::new();
    let mut conj_runs = 0;
    for r in base {
        let t: RadialTheorem = r.theorem.parse().unwrap();
        let (d, _) = radial_verify(t, r.k, r.ell, 1, &doubled).unwrap();
        let change = (d.limit.0 - r.limit.0).hypot(d.limit.1 - r.limit.1);
        if !(change == 0.0 || change < r.error_estimate) {
            moved.push(format!("{} k={}: {change:.2e} vs {:.2e}", r.theorem, r.k, r.error_estimate));
        }
        if r.root_order > 2 {
            conj_runs += 1;
            let (c, _) = radial_verify(t, r.k, r.ell, r.root_order - 1, &RadialConfig::default()).unwrap();
            let gap = (c.limit.0 - r.limit.0).hypot(c.limit.1 + r.limit.1);
            if gap > r.tolerance || !c.pass {
                conj_bad.push(format!("{} k={}: {gap:.2e}", r.theorem, r.k));
            }
        }
    }
    ok(
        moved.is_empty() && conj_bad.is_empty() && base.len() == 16,
        format!(
            "512 bits and doubled term cap: {} of {} limits moved beyond their estimate {moved:?}; conjugate roots: {}/{conj_runs} conjugate within tolerance {conj_bad:?}",
            moved.len(),
            base.len(),
            conj_runs - conj_bad.len()
        ),
    )
}

fn criterion_10(serial: &Report, cfg: &RunConfig) -> Outcome {
    let mut detected = 0;
    let mut tried = 0;
    for e in registry().iter().filter(|e| !KNOWN_FALSE.contains(&e.id)) {
        let Some(spec) = e.default_specializations().into_iter().next() else { continue };
        tried += 1;
        let r = e.perturbed(5, rat(1, 7)).check(&spec, 40).unwrap();
        if !r.pass && r.first_mismatch == Some(5) {
            detected += 1;
        }
    }
    let parallel = cmd_report_all(&RunConfig { jobs: 4, ..cfg.clone() });
    let same = serial.without_timestamp().to_json() == parallel.without_timestamp().to_json();
    ok(
        detected == tried && same,
        format!(
            "perturbation by q^5/7 found at q^5 in {detected}/{tried} entries; serial and 4-thread full reports {}",
            if same { "byte-identical apart from the timestamp" } else { "DIFFER" }
        ),
    )
}

fn main() {
    // The serial full report carries the radial runs reused below.
    let cfg = RunConfig::default();
    let (serial, times) = report_all_timed(&cfg, &radial_cases());
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |n: u32, name: &'static str, o: Outcome| {
        let tag = match (o.pass, o.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:<12} criterion {n:>2} {name}: {}", o.detail);
        results.push((n, name, o));
    };
    record(1, "identity suite", criterion_1());
    record(2, "functional equations", criterion_2());
    record(3, "triple product", criterion_3());
    record(4, "three forms of one Appell-Lerch sum", criterion_4());
    record(5, "unimodal oracle", criterion_5(&serial));
    record(6, "Hecke form of the tail", criterion_6());
    record(7, "cyclotomic layer", criterion_7());
    record(8, "radial limits", criterion_8(&serial, &times));
    record(9, "numeric self-consistency", criterion_9(&serial.radial));
    record(10, "harness integrity", criterion_10(&serial, &cfg));
    let unexpected: Vec<u32> = results.iter().filter(|(_, _, o)| !o.pass && !o.known).map(|(n, _, _)| *n).collect();
    let known: Vec<u32> = results.iter().filter(|(_, _, o)| !o.pass && o.known).map(|(n, _, _)| *n).collect();
    println!(
        "acceptance: {} of {} criteria pass; known-false printed identities affect {:?}; unexpected failures {:?}",
        results.iter().filter(|(_, _, o)| o.pass).count(),
        results.len(),
        known,
        unexpected
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
