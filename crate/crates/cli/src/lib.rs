//! Configuration, report assembly and the commands behind the `mockq` binary.
//!
//! Every command returns a [`Report`] (or a listing) plus an exit status, so the binary
//! only parses arguments and prints.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use mockq::cyclo::{F3Variant, RadialTheorem};
use mockq::mocklib::{self, registry, IdentityEntry, RankSign, Shape, Specialization, VerificationReport};
use mockq::radial::{radial_verify, RadialConfig, RadialRecord, RadialSpec};
use mockq::{Monomial, Rational, Sign};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Problems with the command line or configuration; these exit with status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Format, UsageError> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(usage(format!("unknown format {s:?} (expected text or json)"))),
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Truncation order for identity checks.
    pub order: i64,
    pub precision: u32,
    pub tolerance: f64,
    pub jobs: usize,
    pub format: Format,
    pub config_path: Option<PathBuf>,
    pub f3_variant: F3Variant,
    pub rank_sign: RankSign,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            order: 40,
            precision: 256,
            tolerance: 1e-4,
            jobs: 1,
            format: Format::Text,
            config_path: None,
            f3_variant: F3Variant::Corrected,
            rank_sign: RankSign::RightMinusLeft,
        }
    }
}

/// Values given explicitly, on the command line or through the environment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub order: Option<i64>,
    pub precision: Option<u32>,
    pub tolerance: Option<f64>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
    pub config: Option<PathBuf>,
    pub f3_variant: Option<F3Variant>,
    pub rank_sign: Option<RankSign>,
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
    v.trim().parse().map_err(|_| usage(format!("bad value {v:?} for {key}")))
}

impl RunConfig {
    /// Defaults, then the config file (if any), then `o`.
    pub fn resolve(o: &Overrides) -> Result<RunConfig, UsageError> {
        let mut c = RunConfig::default();
        if let Some(path) = &o.config {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            c.apply_file(&text)?;
            c.config_path = Some(path.clone());
        }
        if let Some(v) = o.order {
            c.order = v;
        }
        if let Some(v) = o.precision {
            c.precision = v;
        }
        if let Some(v) = o.tolerance {
            c.tolerance = v;
        }
        if let Some(v) = o.jobs {
            c.jobs = v;
        }
        if let Some(v) = o.format {
            c.format = v;
        }
        if let Some(v) = o.f3_variant {
            c.f3_variant = v;
        }
        if let Some(v) = o.rank_sign {
            c.rank_sign = v;
        }
        c.validate()?;
        Ok(c)
    }

    /// `key = value` lines; `#` starts a comment. Keys use the long flag names.
    pub fn apply_file(&mut self, text: &str) -> Result<(), UsageError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), UsageError> {
        match key.replace('_', "-").as_str() {
            "order" => self.order = parse_value(key, v)?,
            "precision" => self.precision = parse_value(key, v)?,
            "tolerance" => self.tolerance = parse_value(key, v)?,
            "jobs" => self.jobs = parse_value(key, v)?,
            "format" => self.format = v.parse()?,
            "f3-variant" => self.f3_variant = v.parse().map_err(|e: mockq::Error| usage(e.to_string()))?,
            "rank-sign" => self.rank_sign = v.parse().map_err(|e: mockq::Error| usage(e.to_string()))?,
            _ => return Err(usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.order < 10 {
            return Err(usage(format!("order must be at least 10 (got {})", self.order)));
        }
        if self.precision < 64 {
            return Err(usage(format!("precision must be at least 64 bits (got {})", self.precision)));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(usage(format!("tolerance must be positive (got {})", self.tolerance)));
        }
        if self.jobs == 0 {
            return Err(usage("jobs must be at least 1"));
        }
        Ok(())
    }

    pub fn radial_config(&self) -> RadialConfig {
        RadialConfig {
            precision_bits: self.precision,
            tolerance: self.tolerance,
            f3_variant: self.f3_variant,
            ..RadialConfig::default()
        }
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            order: self.order,
            precision_bits: self.precision,
            tolerance: self.tolerance,
            f3_variant: self.f3_variant.to_string(),
            rank_sign: self.rank_sign.to_string(),
        }
    }
}

/// The settings that can change a result. Parallelism and format are left out so that
/// serial and parallel reports compare equal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub order: i64,
    pub precision_bits: u32,
    pub tolerance: f64,
    pub f3_variant: String,
    pub rank_sign: String,
}

/// A radial run that stopped before producing a limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialError {
    pub theorem: String,
    pub k: u64,
    pub ell: Option<u64>,
    pub root_index: u64,
    pub error: String,
}

/// Agreement of the bivariate unimodal series with brute-force counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnimodalCheck {
    pub max_size: u32,
    pub rank_sign: String,
    pub pass: bool,
    /// Every rank sign under which the counts match.
    pub matching_signs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch. The only field that differs between reruns.
    pub timestamp: u64,
    pub command: String,
    pub config: ConfigEcho,
    pub identities: Vec<VerificationReport>,
    pub radial: Vec<RadialRecord>,
    pub radial_errors: Vec<RadialError>,
    pub unimodal: Option<UnimodalCheck>,
    pub pass: bool,
}

impl Report {
    fn new(command: &str, cfg: &RunConfig) -> Report {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Report {
            tool: "mockq".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
            command: command.into(),
            config: cfg.echo(),
            identities: Vec::new(),
            radial: Vec::new(),
            radial_errors: Vec::new(),
            unimodal: None,
            pass: true,
        }
    }

    fn finish(mut self) -> Report {
        self.pass = self.identities.iter().all(|r| r.pass)
            && self.radial.iter().all(|r| r.pass)
            && self.radial_errors.is_empty()
            && self.unimodal.as_ref().map_or(true, |u| u.pass);
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The same report with the timestamp zeroed, for comparing runs.
    pub fn without_timestamp(&self) -> Report {
        Report { timestamp: 0, ..self.clone() }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.identities {
            let _ = writeln!(s, "{r}");
            for n in &r.notes {
                let _ = writeln!(s, "    note: {n}");
            }
        }
        for r in &self.radial {
            let _ = writeln!(s, "{}", radial_line(r));
        }
        for e in &self.radial_errors {
            let ell = e.ell.map(|l| format!(" l={l}")).unwrap_or_default();
            let _ = writeln!(s, "FAIL {} k={}{ell}: {}", e.theorem, e.k, e.error);
        }
        if let Some(u) = &self.unimodal {
            let _ = writeln!(
                s,
                "{} unimodal counts up to size {} under {} (matching: {})",
                verdict(u.pass),
                u.max_size,
                u.rank_sign,
                u.matching_signs.join(", ")
            );
        }
        let failed = self.identities.iter().filter(|r| !r.pass).count() + self.radial.iter().filter(|r| !r.pass).count() + self.radial_errors.len();
        let total = self.identities.len() + self.radial.len() + self.radial_errors.len();
        let _ = writeln!(s, "overall: {} ({} of {total} checks failed)", verdict(self.pass), failed);
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json() + "\n",
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn radial_line(r: &RadialRecord) -> String {
    let ell = r.ell.map(|l| format!(" l={l}")).unwrap_or_default();
    let variant = r.f3_variant.as_ref().map(|v| format!(" [{v}]")).unwrap_or_default();
    format!(
        "{} {} k={}{ell}{variant} at zeta^{} of order {}: limit {:.12} {:+.12}i, exact {} = {:.12} {:+.12}i, |diff| {:.2e}, estimate {:.2e}",
        verdict(r.pass),
        r.theorem,
        r.k,
        r.root_index,
        r.root_order,
        r.limit.0,
        r.limit.1,
        r.rhs_exact,
        r.rhs.0,
        r.rhs.1,
        r.difference,
        r.error_estimate
    )
}

// ---------------------------------------------------------------------------
// Listing

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityListing {
    pub id: String,
    pub citation: String,
    pub statement: String,
    /// `fixed`, or the free parameters in order.
    pub shape: String,
    pub parameters: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialListing {
    pub id: String,
    pub lhs: String,
    pub evaluation: String,
    pub requirement: String,
    pub ell_values: Vec<u64>,
    /// The two smallest admissible `(k, l)`.
    pub smallest: Vec<(u64, Option<u64>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Listing {
    pub identities: Vec<IdentityListing>,
    pub radial: Vec<RadialListing>,
}

impl Listing {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in &self.identities {
            let _ = writeln!(s, "{:<18} {}\n{:<18} {}\n{:<18} shape: {}", i.id, i.citation, "", i.statement, "", i.shape);
        }
        for r in &self.radial {
            let ell = if r.ell_values.is_empty() {
                String::new()
            } else {
                format!(", l in {:?}", r.ell_values)
            };
            let _ = writeln!(s, "{:<18} radial limit of {} ({}{ell})\n{:<18} {}", r.id, r.lhs, r.requirement, "", r.evaluation);
        }
        s
    }
}

pub fn cmd_list() -> Listing {
    let identities = registry()
        .iter()
        .map(|e| IdentityListing {
            id: e.id.into(),
            citation: e.citation.into(),
            statement: e.statement.into(),
            shape: e.shape.to_string(),
            parameters: match &e.shape {
                Shape::Fixed => Vec::new(),
                Shape::Generic(p) => p.iter().map(|s| s.to_string()).collect(),
            },
        })
        .collect();
    let radial = RadialTheorem::ALL
        .iter()
        .map(|&t| {
            let spec = RadialSpec::get(t);
            RadialListing {
                id: t.name().into(),
                lhs: spec.lhs.into(),
                evaluation: spec.evaluation.into(),
                requirement: t.requirement().into(),
                ell_values: if t == RadialTheorem::Psi10 { vec![1, 3, 5, 7, 9] } else { Vec::new() },
                smallest: t.smallest_params().to_vec(),
            }
        })
        .collect();
    Listing { identities, radial }
}

// ---------------------------------------------------------------------------
// Parsing of parameter values

/// Parse a monomial such as `2`, `-q`, `q^-3`, `-1/3*q^2` or `3q`.
pub fn parse_monomial(s: &str) -> Result<Monomial, UsageError> {
    let bad = || usage(format!("cannot read {s:?} as a monomial (examples: 2, -q, q^-3, -1/3*q^2)"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (Sign::Minus, r),
        None => (Sign::Plus, t.strip_prefix('+').unwrap_or(&t)),
    };
    let (scalar_part, q_part) = match rest.find('q') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let scalar_part = scalar_part.strip_suffix('*').unwrap_or(scalar_part);
    let scalar = if scalar_part.is_empty() {
        if q_part.is_none() {
            return Err(bad());
        }
        Rational::from_integer(1.into())
    } else {
        let r: Rational = scalar_part.parse().map_err(|_| bad())?;
        if r.numer() == &0.into() || r < Rational::from_integer(0.into()) {
            return Err(bad());
        }
        r
    };
    let exponent = match q_part {
        None => 0,
        Some("") => 1,
        Some(p) => p.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
    };
    Ok(Monomial::new(sign, scalar, exponent))
}

/// Parse `name=value,...` for `entry`. The main parameter may also be called `x`, and
/// `M` sets the base substitution.
pub fn parse_specialization(entry: &IdentityEntry, s: &str) -> Result<Specialization, UsageError> {
    let names: Vec<&str> = match &entry.shape {
        Shape::Fixed => Vec::new(),
        Shape::Generic(p) => p.clone(),
    };
    let mut values: BTreeMap<usize, Monomial> = BTreeMap::new();
    let mut base = 1i64;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| usage(format!("expected name=value, got {part:?}")))?;
        let k = k.trim();
        if k == "M" {
            base = parse_value("M", v)?;
            if base < 1 {
                return Err(usage("M must be a positive integer"));
            }
            continue;
        }
        let idx = names
            .iter()
            .position(|n| *n == k)
            .or_else(|| (k == "x" && !names.is_empty()).then_some(0))
            .ok_or_else(|| usage(format!("{} has no parameter {k:?} (parameters: {})", entry.id, names.join(", "))))?;
        values.insert(idx, parse_monomial(v)?);
    }
    let mut params = Vec::new();
    for (i, n) in names.iter().enumerate() {
        params.push(values.remove(&i).ok_or_else(|| usage(format!("missing value for parameter {n} of {}", entry.id)))?);
    }
    let x = if params.is_empty() { Monomial::one() } else { params.remove(0) };
    Ok(Specialization::new(x, base).with_extra(params))
}

// ---------------------------------------------------------------------------
// Commands

fn resolve_ids(ids: &[String]) -> Result<Vec<&'static IdentityEntry>, UsageError> {
    if ids.is_empty() || ids.iter().any(|i| i == "all") {
        return Ok(registry().iter().collect());
    }
    ids.iter().map(|i| mocklib::entry(i).map_err(|e| usage(e.to_string()))).collect()
}

/// Specializations to check for `e`: the registry defaults, or a searched grid point
/// when none of the candidates is admissible.
fn specializations_for(e: &IdentityEntry) -> Vec<Specialization> {
    let d = e.default_specializations();
    if !d.is_empty() {
        return d;
    }
    e.find_admissible_specializations(2, 2).into_iter().take(3).collect()
}

fn check_all(work: &[(&IdentityEntry, Specialization)], order: i64, jobs: usize) -> Vec<VerificationReport> {
    let run = |(e, s): &(&IdentityEntry, Specialization)| e.check_report(s, order);
    if jobs <= 1 {
        return work.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    pool.install(|| work.par_iter().map(run).collect())
}

/// Check identities. With `at`, every listed id is checked at that specialization
/// only; otherwise at its default specializations.
pub fn cmd_check(ids: &[String], at: Option<&str>, cfg: &RunConfig) -> Result<Report, UsageError> {
    let entries = resolve_ids(ids)?;
    let mut work = Vec::new();
    let mut report = Report::new("check", cfg);
    for e in entries {
        match at {
            Some(s) => work.push((e, parse_specialization(e, s)?)),
            None => {
                let specs = specializations_for(e);
                if specs.is_empty() {
                    report.identities.push(VerificationReport {
                        id: e.id.into(),
                        specialization: String::new(),
                        order: cfg.order,
                        pass: false,
                        failing_form: None,
                        first_mismatch: None,
                        lhs_coefficient: None,
                        rhs_coefficient: None,
                        error: Some("no admissible specialization found".into()),
                        notes: Vec::new(),
                    });
                }
                work.extend(specs.into_iter().map(|s| (e, s)));
            }
        }
    }
    report.identities.extend(check_all(&work, cfg.order, cfg.jobs));
    Ok(report.finish())
}

fn radial_one(t: RadialTheorem, k: u64, ell: Option<u64>, root_index: u64, rc: &RadialConfig) -> Result<RadialRecord, RadialError> {
    radial_verify(t, k, ell, root_index, rc).map(|(r, _)| r).map_err(|e| RadialError {
        theorem: t.name().into(),
        k,
        ell,
        root_index,
        error: e.to_string(),
    })
}

/// One radial-limit check. Inadmissible parameters are a usage error.
pub fn cmd_radial(theorem: &str, k: u64, ell: Option<u64>, root_index: u64, cfg: &RunConfig) -> Result<Report, UsageError> {
    let t: RadialTheorem = theorem.parse().map_err(|e: mockq::Error| usage(e.to_string()))?;
    let n = t.order(k, ell).map_err(|e| usage(e.to_string()))?;
    if root_index == 0 || (n > 1 && root_index >= n) || gcd(root_index, n) != 1 {
        return Err(usage(format!("root index {root_index} must lie in 1..{n} and be coprime to {n}")));
    }
    let mut report = Report::new("radial", cfg);
    match radial_one(t, k, ell, root_index, &cfg.radial_config()) {
        Ok(r) => report.radial.push(r),
        Err(e) => report.radial_errors.push(e),
    }
    Ok(report.finish())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every radial theorem at its two smallest admissible parameters, at `zeta = e^{2 pi i/n}`.
pub fn radial_cases() -> Vec<(RadialTheorem, u64, Option<u64>)> {
    RadialTheorem::ALL.iter().flat_map(|&t| t.smallest_params().into_iter().map(move |(k, l)| (t, k, l))).collect()
}

/// The unimodal oracle up to size 16 under the configured rank sign.
pub fn unimodal_check(sign: RankSign) -> UnimodalCheck {
    const MAX: u32 = 16;
    let matching_signs = [RankSign::RightMinusLeft, RankSign::LeftMinusRight]
        .into_iter()
        .filter(|&s| mocklib::oracle_matches(MAX, s))
        .map(|s| s.to_string())
        .collect::<Vec<_>>();
    UnimodalCheck { max_size: MAX, rank_sign: sign.to_string(), pass: matching_signs.contains(&sign.to_string()), matching_signs }
}

/// The identity suite, the unimodal oracle and every radial theorem at its two smallest
/// admissible parameters. Work is spread over `cfg.jobs` threads; assembly is in a
/// fixed order, so the result does not depend on the thread count.
pub fn cmd_report_all(cfg: &RunConfig) -> Report {
    report_all_with(cfg, &radial_cases())
}

/// [`cmd_report_all`] restricted to the given radial cases.
pub fn report_all_with(cfg: &RunConfig, cases: &[(RadialTheorem, u64, Option<u64>)]) -> Report {
    report_all_timed(cfg, cases).0
}

/// [`report_all_with`], also returning the wall time of each radial case. Timings stay
/// out of the report so that it remains reproducible.
pub fn report_all_timed(cfg: &RunConfig, cases: &[(RadialTheorem, u64, Option<u64>)]) -> (Report, Vec<Duration>) {
    let mut report = Report::new("report-all", cfg);
    let work: Vec<(&IdentityEntry, Specialization)> =
        registry().iter().flat_map(|e| specializations_for(e).into_iter().map(move |s| (e, s))).collect();
    report.identities = check_all(&work, cfg.order, cfg.jobs);
    report.unimodal = Some(unimodal_check(cfg.rank_sign));
    let rc = cfg.radial_config();
    let run = |&(t, k, l): &(RadialTheorem, u64, Option<u64>)| {
        let start = Instant::now();
        (radial_one(t, k, l, 1, &rc), start.elapsed())
    };
    let outcomes: Vec<(Result<RadialRecord, RadialError>, Duration)> = if cfg.jobs <= 1 {
        cases.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().expect("thread pool");
        pool.install(|| cases.par_iter().map(run).collect())
    };
    let mut times = Vec::new();
    for (o, dt) in outcomes {
        times.push(dt);
        match o {
            Ok(r) => report.radial.push(r),
            Err(e) => report.radial_errors.push(e),
        }
    }
    (report.finish(), times)
}

/// Write `text` to `path`, or to stdout when there is none.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), UsageError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_parse() {
        assert_eq!(parse_monomial("-q").unwrap(), Monomial::neg_q_pow(1));
        assert_eq!(parse_monomial("q^-3").unwrap(), Monomial::q_pow(-3));
        assert_eq!(parse_monomial("2").unwrap(), Monomial::int(2));
        assert_eq!(parse_monomial("-1/3*q^2").unwrap(), Monomial::new(Sign::Minus, mockq::qlaurent::rat(1, 3), 2));
        assert_eq!(parse_monomial("3q").unwrap(), Monomial::new(Sign::Plus, mockq::qlaurent::rat(3, 1), 1));
        for bad in ["", "-", "0", "q^", "x", "q^1.5", "-2/0"] {
            assert!(parse_monomial(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        for m in [Monomial::neg_q_pow(-2), Monomial::new(Sign::Minus, mockq::qlaurent::rat(5, 7), 3), Monomial::int(4)] {
            assert_eq!(parse_monomial(&m.to_string()).unwrap(), m);
        }
    }

    #[test]
    fn specialization_by_name() {
        let e = mocklib::entry("z-shift").unwrap();
        let names = match &e.shape {
            Shape::Generic(p) => p.clone(),
            Shape::Fixed => unreachable!(),
        };
        let text: Vec<String> = names.iter().enumerate().map(|(i, n)| format!("{n}=q^{}", i + 2)).collect();
        let s = parse_specialization(e, &(text.join(",") + ",M=2")).unwrap();
        assert_eq!(s.x, Monomial::q_pow(2));
        assert_eq!(s.base, 2);
        assert_eq!(s.extra.len(), names.len() - 1);
        assert!(parse_specialization(e, "nope=2").is_err());
    }

    #[test]
    fn config_layers() {
        let mut c = RunConfig::default();
        c.apply_file("# comment\norder = 30\nf3_variant = corrected\n\nformat=json\n").unwrap();
        assert_eq!((c.order, c.f3_variant, c.format), (30, F3Variant::Corrected, Format::Json));
        assert!(c.apply_file("order 30").is_err());
        assert!(c.apply_file("colour = red").is_err());
        let dir = std::env::temp_dir().join(format!("mockq-cfg-{}", std::process::id()));
        std::fs::write(&dir, "order = 30\nprecision = 128\n").unwrap();
        let r = RunConfig::resolve(&Overrides { config: Some(dir.clone()), order: Some(12), ..Overrides::default() }).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!((r.order, r.precision), (12, 128));
    }

    #[test]
    fn validation_bounds() {
        let bad = [
            Overrides { order: Some(9), ..Overrides::default() },
            Overrides { precision: Some(63), ..Overrides::default() },
            Overrides { tolerance: Some(0.0), ..Overrides::default() },
            Overrides { jobs: Some(0), ..Overrides::default() },
        ];
        for o in bad {
            assert!(RunConfig::resolve(&o).is_err(), "{o:?}");
        }
        assert!(RunConfig::resolve(&Overrides { order: Some(10), precision: Some(64), ..Overrides::default() }).is_ok());
    }

    #[test]
    fn listing_covers_registry_and_radial() {
        let l = cmd_list();
        assert_eq!(l.identities.len(), registry().len());
        assert_eq!(l.radial.len(), 8);
        let psi = l.radial.iter().find(|r| r.id == "PSI10").unwrap();
        assert_eq!(psi.ell_values, vec![1, 3, 5, 7, 9]);
    }

    #[test]
    fn inadmissible_radial_is_a_usage_error() {
        let e = cmd_radial("EX1", 2, None, 1, &RunConfig::default()).unwrap_err();
        assert!(e.0.contains("k odd"), "{e}");
        assert!(cmd_radial("EX3", 0, None, 1, &RunConfig::default()).unwrap_err().0.contains("4k"));
        assert!(cmd_radial("FOR", 2, None, 2, &RunConfig::default()).is_err());
        assert!(cmd_radial("NOPE", 1, None, 1, &RunConfig::default()).is_err());
    }

    #[test]
    fn check_of_one_identity() {
        let cfg = RunConfig { order: 20, ..RunConfig::default() };
        let r = cmd_check(&["z-shift".into()], None, &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.exit_code(), EXIT_PASS);
        assert!(matches!(cmd_check(&["no-such-id".into()], None, &cfg), Err(UsageError(_))));
    }
}
