//! Brute-force oracles and the verification grids built on them.
//!
//! The oracles are deliberately naive: they multiply unit parts one factor
//! at a time and never touch the fast factorial or limit code. Each grid puts
//! an oracle value on one side and the implemented formula on the other, and
//! enumerates every cell even after a failure.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial_units::{gauss_unit_product, unit_factorial_mod, ZetaTable};
use crate::infinite_binom::{binom_inf, binom_inf_offset, pascal_closed_form, validate_pair, BinomQuery};
use crate::padic::PadicApprox;
use crate::prime::{is_prime, Prime};
use crate::valuations;

/// Largest oracle argument accepted without `force`.
pub const ORACLE_GUARD: u64 = 10_000_000;

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= 1 << 32 {
        a * b % m
    } else {
        ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
    }
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strip(mut n: u64, p: u64) -> (u64, u64) {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Naive reference computations.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub guard: u64,
    pub force: bool,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { guard: ORACLE_GUARD, force: false }
    }
}

impl Oracle {
    pub fn forced() -> Self {
        Oracle { force: true, ..Oracle::default() }
    }

    fn check_size(&self, n: u128) -> Result<u64> {
        if !self.force && n > u128::from(self.guard) {
            return Err(Error::OracleTooLarge { value: n.to_string(), guard: self.guard });
        }
        u64::try_from(n).map_err(|_| Error::OracleTooLarge { value: n.to_string(), guard: u64::MAX })
    }

    fn modulus(p: Prime, m: u32) -> Result<u64> {
        p.get()
            .checked_pow(m)
            .filter(|&q| q < 1 << 63)
            .ok_or(Error::ModulusTooLarge(p.get(), m))
    }

    /// `u(n!) mod p^m` as `Π_{i=1..n} u(i)`.
    pub fn unit_factorial(&self, n: u64, p: Prime, m: u32) -> Result<BigUint> {
        self.check_size(u128::from(n))?;
        let modulus = Self::modulus(p, m)?;
        let q = p.get();
        let acc = (1..=n).fold(1 % modulus, |acc, i| mulmod(acc, strip(i, q).1 % modulus, modulus));
        Ok(BigUint::from(acc))
    }

    /// `C(a p^e + c, b p^e + d)` reduced to `m` unit digits, from the
    /// product `Π_{i=1..k} (N - k + i) / i`.
    #[allow(clippy::too_many_arguments)]
    pub fn binom(&self, a: u64, b: u64, c: i64, d: i64, p: Prime, e: u32, m: u32) -> Result<PadicApprox> {
        let scale = u128::from(p.get())
            .checked_pow(e)
            .ok_or_else(|| Error::OracleTooLarge { value: format!("{p}^{e}"), guard: self.guard })?;
        let top = i128::try_from(u128::from(a) * scale).unwrap_or(i128::MAX).saturating_add(i128::from(c));
        let bottom = i128::try_from(u128::from(b) * scale).unwrap_or(i128::MAX).saturating_add(i128::from(d));
        if bottom < 0 || bottom > top {
            return Err(Error::domain(format!("C({top}, {bottom}) is outside 0 <= k <= n")));
        }
        let n = self.check_size(top as u128)?;
        let k = (bottom as u64).min(n - bottom as u64);
        self.binom_exact(n, k, p, m)
    }

    fn binom_exact(&self, n: u64, k: u64, p: Prime, m: u32) -> Result<PadicApprox> {
        let modulus = Self::modulus(p, m)?;
        let q = p.get();
        let (mut v, mut num, mut den) = (0i64, 1 % modulus, 1 % modulus);
        for i in 1..=k {
            let (vn, un) = strip(n - k + i, q);
            let (vd, ud) = strip(i, q);
            v += vn as i64 - vd as i64;
            num = mulmod(num, un % modulus, modulus);
            den = mulmod(den, ud % modulus, modulus);
        }
        // Euler: den^{φ(p^m) - 1} inverts a unit.
        let phi = modulus / q * (q - 1);
        let unit = mulmod(num, powmod(den, phi - 1, modulus), modulus);
        PadicApprox::from_unit(p, v, BigUint::from(unit), m)
    }
}

/// Names of the verification suites, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[serde(rename = "theorem1")]
    Theorem1,
    #[serde(rename = "theorem2")]
    Theorem2,
    #[serde(rename = "theorem3")]
    Theorem3,
    LemmaMultiset,
    Gauss,
    NuFormulas,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::LemmaMultiset,
        Suite::Gauss,
        Suite::NuFormulas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::LemmaMultiset => "lemma-multiset",
            Suite::Gauss => "gauss",
            Suite::NuFormulas => "nu-formulas",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Grid coordinates of one case, re-runnable through the matching
/// `check_*` function.
pub type Params = BTreeMap<String, i64>;

fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub params: Params,
    pub expected: String,
    pub actual: String,
}

/// A case that lies outside a hypothesis and is recorded rather than judged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryCase {
    pub params: Params,
    pub note: String,
}

/// Result of checking one grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { expected: String, actual: String },
    Boundary(String),
}

impl Outcome {
    fn compare<T: PartialEq + fmt::Display>(expected: T, actual: T) -> Self {
        if expected == actual {
            Outcome::Pass
        } else {
            Outcome::Fail { expected: expected.to_string(), actual: actual.to_string() }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub grid: String,
    pub cases_run: u64,
    pub boundary_cases: Vec<BoundaryCase>,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(suite: Suite, grid: String) -> Self {
        VerificationReport {
            suite,
            grid,
            cases_run: 0,
            boundary_cases: Vec::new(),
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, params: Params, outcome: Outcome) {
        self.cases_run += 1;
        match outcome {
            Outcome::Pass => {}
            Outcome::Fail { expected, actual } => self.failures.push(Failure { params, expected, actual }),
            Outcome::Boundary(note) => self.boundary_cases.push(BoundaryCase { params, note }),
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.elapsed = started.elapsed();
        self
    }
}

/// Aligned plain-text table, one row per report plus failure details.
pub fn render_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<15} {:>8} {:>9} {:>9}  status", "suite", "cases", "boundary", "failures");
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<15} {:>8} {:>9} {:>9}  {status}",
            r.suite.name(),
            r.cases_run,
            r.boundary_cases.len(),
            r.failures.len()
        );
    }
    for r in reports {
        let _ = writeln!(out, "\n[{}] {}", r.suite, r.grid);
        for b in &r.boundary_cases {
            let _ = writeln!(out, "  boundary {}: {}", format_params(&b.params), b.note);
        }
        for f in &r.failures {
            let _ = writeln!(
                out,
                "  FAIL {}: expected {}, got {}",
                format_params(&f.params),
                f.expected,
                f.actual
            );
        }
    }
    out
}

fn format_params(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn primes(list: &[u64]) -> Result<Vec<Prime>> {
    list.iter().map(|&p| Prime::new(p)).collect()
}

// ---------------------------------------------------------------------------
// factorial step congruence

#[derive(Debug, Clone)]
pub struct FactorialStepGrid {
    /// `(p, largest e)` pairs.
    pub primes: Vec<(u64, u32)>,
    pub max_alpha: u64,
}

impl Default for FactorialStepGrid {
    fn default() -> Self {
        FactorialStepGrid { primes: vec![(2, 12), (3, 7), (5, 5)], max_alpha: 9 }
    }
}

/// `u((α p^{e-1})!) ≡ (-1)^{pα} u((α p^e)!) (mod p^e)`, oracle on the left,
/// fast factorial on the right.
pub fn check_factorial_step(oracle: &Oracle, p: Prime, alpha: u64, e: u32) -> Result<Outcome> {
    let q = p.get();
    let modulus = BigUint::from(q).pow(e);
    let left = oracle.unit_factorial(alpha * q.pow(e - 1), p, e)?;
    let mut right = unit_factorial_mod(&(BigUint::from(alpha) * &modulus), p, e)?;
    if (q * alpha) % 2 == 1 {
        right = (&modulus - right) % &modulus;
    }
    let outcome = Outcome::compare(left, right);
    if q.pow(e) <= 4 {
        let held = if outcome == Outcome::Pass { "holds" } else { "fails" };
        return Ok(Outcome::Boundary(format!("p^e = {} <= 4, congruence {held}", q.pow(e))));
    }
    Ok(outcome)
}

pub fn verify_factorial_step(oracle: &Oracle, grid: &FactorialStepGrid) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(
        Suite::Theorem1,
        format!("(p, e_max) in {:?}, α <= {} coprime to p", grid.primes, grid.max_alpha),
    );
    for &(q, max_e) in &grid.primes {
        let p = Prime::new(q)?;
        for alpha in (1..=grid.max_alpha).filter(|a| a % q != 0) {
            for e in 1..=max_e {
                let outcome = check_factorial_step(oracle, p, alpha, e)?;
                report.record(params(&[("p", q as i64), ("alpha", alpha as i64), ("e", e as i64)]), outcome);
            }
        }
    }
    Ok(report.finish(started))
}

// ---------------------------------------------------------------------------
// unit part of C(a p^e, b p^e)

#[derive(Debug, Clone)]
pub struct ScaledBinomialGrid {
    pub primes: Vec<u64>,
    pub max_a: u64,
    /// Explicit exponent ceiling; otherwise `e` runs while `a p^e` fits the
    /// oracle guard.
    pub max_e: Option<u32>,
}

impl Default for ScaledBinomialGrid {
    fn default() -> Self {
        ScaledBinomialGrid { primes: vec![2, 3], max_a: 8, max_e: None }
    }
}

/// Oracle `C(a p^e, b p^e)` against `p^{ν C(a,b)}` times the signed `z`
/// quotient, modulo `p^e`.
pub fn check_scaled_binomial(
    oracle: &Oracle,
    zetas: &ZetaTable,
    p: Prime,
    a: u64,
    b: u64,
    e: u32,
) -> Result<Outcome> {
    let expected = oracle.binom(a, b, 0, 0, p, e, e)?;
    let actual = binom_inf(zetas, a, b, p, e)?;
    Ok(Outcome::compare(expected, actual))
}

pub fn verify_scaled_binomial(
    oracle: &Oracle,
    zetas: &ZetaTable,
    grid: &ScaledBinomialGrid,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(
        Suite::Theorem2,
        format!("p in {:?}, 1 <= b < a <= {}, ν(a−b) = 0, a·p^e <= {}", grid.primes, grid.max_a, oracle.guard),
    );
    for p in primes(&grid.primes)? {
        let q = p.get();
        for a in 2..=grid.max_a {
            for b in 1..a {
                if (a - b) % q == 0 {
                    continue;
                }
                let max_e = grid.max_e.unwrap_or_else(|| {
                    let mut e = 0;
                    while a * q.pow(e + 1) <= oracle.guard {
                        e += 1;
                    }
                    e
                });
                // descending so that the zeta cache serves lower precisions
                for e in (1..=max_e).rev() {
                    let outcome = check_scaled_binomial(oracle, zetas, p, a, b, e)?;
                    report.record(
                        params(&[("p", q as i64), ("a", a as i64), ("b", b as i64), ("e", e as i64)]),
                        outcome,
                    );
                }
            }
        }
    }
    Ok(report.finish(started))
}

// ---------------------------------------------------------------------------
// offset limits C(a p^∞ + c, b p^∞ + d)

#[derive(Debug, Clone)]
pub struct OffsetGrid {
    /// `(p, pairs)`.
    pub cells: Vec<(u64, Vec<(u64, u64)>)>,
    pub offset_range: std::ops::RangeInclusive<i64>,
    pub precision: u32,
}

impl Default for OffsetGrid {
    fn default() -> Self {
        OffsetGrid {
            cells: vec![
                (2, vec![(2, 1), (3, 2), (5, 2)]),
                (3, vec![(2, 1), (3, 2), (5, 2), (3, 1)]),
            ],
            offset_range: -4..=4,
            precision: 6,
        }
    }
}

impl OffsetGrid {
    fn describe(&self) -> String {
        format!(
            "(p, pairs) in {:?}, c, d in {:?}, m = {}",
            self.cells, self.offset_range, self.precision
        )
    }
}

fn ceil_log2(n: u64) -> u64 {
    u64::from(64 - (n.max(1) - 1).leading_zeros())
}

/// Digits of slack before the oracle is expected to agree with the limit:
/// `⌈log2 max(|c|, |d|, 1)⌉ + ν(C(a,b)) + ν(a)`.
pub fn stabilization_slack(p: Prime, a: u64, b: u64, c: i64, d: i64) -> Result<u64> {
    let spread = c.unsigned_abs().max(d.unsigned_abs()).max(1);
    Ok(ceil_log2(spread) + valuations::nu_binom_legendre(&a, &b, p)? + valuations::nu(&a, p)?)
}

/// Checks one `(p, a, b, c, d)` cell against oracle values at increasing `e`.
///
/// For a nonzero limit every `e` with `t = min(m, e - slack) >= 1` must agree
/// with the limit in valuation and `t` unit digits. For a zero limit the
/// oracle valuation must strictly increase over the last three exponents.
pub fn check_offset_limit(
    oracle: &Oracle,
    zetas: &ZetaTable,
    p: Prime,
    (a, b): (u64, u64),
    (c, d): (i64, i64),
    m: u32,
) -> Result<Outcome> {
    let pair = match validate_pair(a, b, p) {
        Ok(pair) => pair,
        Err(e @ (Error::HypothesisViolation(_) | Error::DegeneratePair(_))) => {
            return Ok(Outcome::Boundary(format!("refused: {e}")));
        }
        Err(e) => return Err(e),
    };
    let limit = binom_inf_offset(zetas, &BinomQuery::new(p, a, b, c, d, m)?)?;
    let slack = stabilization_slack(p, pair.a, pair.b, c, d)?;
    let last = u32::try_from(u64::from(m) + slack + 2).expect("small exponent");

    let oracle_at = |e: u32| -> Result<Option<PadicApprox>> {
        match oracle.binom(pair.a, pair.b, c, d, p, e, m) {
            Ok(x) => Ok(Some(x)),
            Err(Error::Domain(_)) => Ok(None),
            Err(err) => Err(err),
        }
    };

    if limit.is_exact_zero() {
        let mut vals = Vec::new();
        for e in last - 2..=last {
            match oracle_at(e)? {
                Some(x) => vals.push(x.finite_valuation().expect("oracle binomials are nonzero")),
                None => return Ok(Outcome::Fail {
                    expected: "binomial in range".into(),
                    actual: format!("out of range at e = {e}"),
                }),
            }
        }
        let increasing = vals.windows(2).all(|w| w[0] < w[1]);
        return Ok(if increasing {
            Outcome::Pass
        } else {
            Outcome::Fail {
                expected: "strictly increasing valuations".into(),
                actual: format!("{vals:?} at e = {}..={last}", last - 2),
            }
        });
    }

    for e in 1..=last {
        let digits = (i64::from(e) - slack as i64).min(i64::from(m));
        if digits < 1 {
            continue;
        }
        let Some(value) = oracle_at(e)? else { continue };
        if !value.equal_to_precision(&limit, digits as u32)? {
            return Ok(Outcome::Fail {
                expected: format!("{limit} to {digits} digits"),
                actual: format!("{value} at e = {e}"),
            });
        }
    }
    Ok(Outcome::Pass)
}

pub fn verify_offset_limits(oracle: &Oracle, zetas: &ZetaTable, grid: &OffsetGrid) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(Suite::Theorem3, grid.describe());
    for (q, pairs) in &grid.cells {
        let p = Prime::new(*q)?;
        for &(a, b) in pairs {
            if let Err(e @ (Error::HypothesisViolation(_) | Error::DegeneratePair(_))) = validate_pair(a, b, p) {
                report.record(
                    params(&[("p", *q as i64), ("a", a as i64), ("b", b as i64)]),
                    Outcome::Boundary(format!("refused: {e}")),
                );
                continue;
            }
            for c in grid.offset_range.clone() {
                for d in grid.offset_range.clone() {
                    let outcome = check_offset_limit(oracle, zetas, p, (a, b), (c, d), grid.precision)?;
                    report.record(
                        params(&[("p", *q as i64), ("a", a as i64), ("b", b as i64), ("c", c), ("d", d)]),
                        outcome,
                    );
                }
            }
        }
    }
    Ok(report.finish(started))
}

/// Pascal's rule `f(n, k) = f(n-1, k) + f(n-1, k-1)` for the closed form at
/// every `(n, k)` in `range²`, compared to the working precision of `A`, `r`.
pub fn check_pascal_relation(
    big_a: &PadicApprox,
    r: &PadicApprox,
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<Failure>> {
    let mut failures = Vec::new();
    for n in range.clone() {
        for k in range.clone() {
            let lhs = pascal_closed_form(big_a, r, n, k)?;
            let rhs = pascal_closed_form(big_a, r, n - 1, k)?.add(&pascal_closed_form(big_a, r, n - 1, k - 1)?)?;
            let digits = [lhs.absolute_precision(), rhs.absolute_precision()].into_iter().flatten().min();
            let agree = match digits {
                None => lhs == rhs,
                Some(t) => lhs.congruent_mod(&rhs, t)?,
            };
            if !agree {
                failures.push(Failure {
                    params: params(&[("n", n), ("k", k)]),
                    expected: lhs.to_string(),
                    actual: rhs.to_string(),
                });
            }
        }
    }
    Ok(failures)
}

/// The closed form with `A = C(a p^∞, b p^∞)` and `r = (a-b)/a` against the
/// offset limits, over the offset grid.
pub fn verify_pascal_instantiation(zetas: &ZetaTable, grid: &OffsetGrid) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(Suite::Theorem3, format!("closed form vs limits: {}", grid.describe()));
    let m = grid.precision;
    for (q, pairs) in &grid.cells {
        let p = Prime::new(*q)?;
        for &(a, b) in pairs {
            let Ok(pair) = validate_pair(a, b, p) else { continue };
            let working = m + 8;
            let big_a = binom_inf(zetas, a, b, p, working)?;
            let r = PadicApprox::from_ratio(
                &BigInt::from(pair.a - pair.b),
                &BigInt::from(pair.a),
                p,
                working,
            )?;
            for c in grid.offset_range.clone() {
                for d in grid.offset_range.clone() {
                    let limit = binom_inf_offset(zetas, &BinomQuery::new(p, a, b, c, d, m)?)?;
                    let closed = pascal_closed_form(&big_a, &r, c, d)?;
                    let agree = if limit.is_exact_zero() {
                        closed.is_exact_zero()
                    } else {
                        !closed.is_exact_zero() && closed.equal_to_precision(&limit, m)?
                    };
                    let outcome = if agree {
                        Outcome::Pass
                    } else {
                        Outcome::Fail { expected: limit.to_string(), actual: closed.to_string() }
                    };
                    report.record(
                        params(&[("p", *q as i64), ("a", a as i64), ("b", b as i64), ("c", c), ("d", d)]),
                        outcome,
                    );
                }
            }
        }
    }
    Ok(report.finish(started))
}

// ---------------------------------------------------------------------------
// unit-part multiset

#[derive(Debug, Clone)]
pub struct MultisetGrid {
    pub primes: Vec<u64>,
    pub max_alpha: u64,
    pub max_modulus: u64,
}

impl Default for MultisetGrid {
    fn default() -> Self {
        MultisetGrid { primes: vec![2, 3, 5], max_alpha: 4, max_modulus: 243 }
    }
}

/// Every unit below `p^e` occurs exactly `α` times among
/// `u(i) mod p^e` for `α p^{e-1} < i <= α p^e`, and nothing else occurs.
pub fn check_unit_multiset(p: Prime, alpha: u64, e: u32) -> Outcome {
    let q = p.get();
    let modulus = q.pow(e);
    let mut counts = vec![0u64; modulus as usize];
    for i in alpha * q.pow(e - 1) + 1..=alpha * modulus {
        counts[(strip(i, q).1 % modulus) as usize] += 1;
    }
    let bad: Vec<String> = counts
        .iter()
        .enumerate()
        .filter(|&(r, &n)| n != if (r as u64).is_multiple_of(q) { 0 } else { alpha })
        .map(|(r, n)| format!("{r}×{n}"))
        .collect();
    if bad.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail { expected: format!("each unit {alpha} times"), actual: bad.join(", ") }
    }
}

pub fn verify_unit_multiset(grid: &MultisetGrid) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(
        Suite::LemmaMultiset,
        format!("p in {:?}, α <= {} coprime to p, p^e <= {}", grid.primes, grid.max_alpha, grid.max_modulus),
    );
    for p in primes(&grid.primes)? {
        let q = p.get();
        for alpha in (1..=grid.max_alpha).filter(|a| a % q != 0) {
            let mut e = 1;
            while q.pow(e) <= grid.max_modulus {
                report.record(
                    params(&[("p", q as i64), ("alpha", alpha as i64), ("e", e as i64)]),
                    check_unit_multiset(p, alpha, e),
                );
                e += 1;
            }
        }
    }
    Ok(report.finish(started))
}

// ---------------------------------------------------------------------------
// Gauss unit product

#[derive(Debug, Clone)]
pub struct GaussGrid {
    pub max_modulus: u64,
    pub max_prime: u64,
}

impl Default for GaussGrid {
    fn default() -> Self {
        GaussGrid { max_modulus: 1_000_000, max_prime: 1_000_000 }
    }
}

/// Product of the units below `p^e` against `(-1)^p`; moduli `<= 4` are
/// recorded as boundary cases.
pub fn check_gauss(p: Prime, e: u32) -> Result<Outcome> {
    let modulus = p.get().pow(e);
    let product = gauss_unit_product(p, e)?;
    let expected = if p.is_two() { 1 % modulus } else { modulus - 1 };
    if modulus <= 4 {
        let verdict = if product == BigUint::from(expected) { "agrees" } else { "differs" };
        return Ok(Outcome::Boundary(format!(
            "p^e = {modulus} <= 4: product {product} {verdict} with (-1)^p ≡ {expected}"
        )));
    }
    Ok(Outcome::compare(BigUint::from(expected), product))
}

pub fn verify_gauss_products(grid: &GaussGrid) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(
        Suite::Gauss,
        format!("p <= {}, p^e <= {}", grid.max_prime, grid.max_modulus),
    );
    for q in (2..=grid.max_prime.min(grid.max_modulus)).filter(|&n| is_prime(n)) {
        let p = Prime::new(q)?;
        let mut e = 1;
        while q.checked_pow(e).is_some_and(|m| m <= grid.max_modulus) {
            report.record(params(&[("p", q as i64), ("e", e as i64)]), check_gauss(p, e)?);
            e += 1;
        }
    }
    Ok(report.finish(started))
}

// ---------------------------------------------------------------------------
// binomial valuation formulas

#[derive(Debug, Clone)]
pub struct NuFormulaGrid {
    pub primes: Vec<u64>,
    pub max_a: u64,
    pub scaled_max_a: u64,
    pub scaled_max_e: u32,
}

impl Default for NuFormulaGrid {
    fn default() -> Self {
        NuFormulaGrid { primes: vec![2, 3, 5, 7], max_a: 2000, scaled_max_a: 30, scaled_max_e: 6 }
    }
}

/// `ν_p` of an exact positive integer by repeated division.
fn nu_direct(n: &BigUint, p: u32) -> u64 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Digit-sum form, carry count and factorization of the exact `C(a, b)`.
pub fn check_nu_formulas(p: Prime, a: u64, b: u64, exact: &BigUint) -> Result<Outcome> {
    let direct = nu_direct(exact, p.get() as u32);
    let legendre = valuations::nu_binom_legendre(&a, &b, p)?;
    let kummer = valuations::nu_binom_kummer(&a, &b, p)?;
    Ok(if direct == legendre && direct == kummer {
        Outcome::Pass
    } else {
        Outcome::Fail {
            expected: format!("direct {direct}"),
            actual: format!("legendre {legendre}, kummer {kummer}"),
        }
    })
}

pub fn verify_nu_formulas(grid: &NuFormulaGrid) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(
        Suite::NuFormulas,
        format!(
            "p in {:?}, 0 <= b <= a <= {}; scaled a <= {}, e <= {}",
            grid.primes, grid.max_a, grid.scaled_max_a, grid.scaled_max_e
        ),
    );
    let ps = primes(&grid.primes)?;
    // Pascal's triangle, row by row; only the left half is needed.
    let mut row: Vec<BigUint> = vec![BigUint::from(1u8)];
    for a in 0..=grid.max_a {
        if a > 0 {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigUint::from(1u8));
            for j in 1..a as usize {
                next.push(&row[j - 1] + &row[j]);
            }
            next.push(BigUint::from(1u8));
            row = next;
        }
        for b in 0..=a / 2 {
            for &p in &ps {
                let outcome = check_nu_formulas(p, a, b, &row[b as usize])?;
                let mirrored = check_nu_formulas(p, a, a - b, &row[b as usize])?;
                let outcome = if outcome == Outcome::Pass { mirrored } else { outcome };
                report.record(params(&[("p", p.get() as i64), ("a", a as i64), ("b", b as i64)]), outcome);
            }
        }
    }
    for &p in &ps {
        for a in 0..=grid.scaled_max_a {
            for b in 0..=a {
                for e in 0..=grid.scaled_max_e {
                    let scale = p.get().pow(e);
                    let base = valuations::nu_binom_legendre(&a, &b, p)?;
                    let scaled = valuations::nu_binom_kummer(&(a * scale), &(b * scale), p)?;
                    let invariant = valuations::nu_binom_scaled_invariance_check(&a, &b, p, e)?;
                    let outcome = if invariant && base == scaled {
                        Outcome::Pass
                    } else {
                        Outcome::Fail { expected: base.to_string(), actual: scaled.to_string() }
                    };
                    report.record(
                        params(&[("p", p.get() as i64), ("a", a as i64), ("b", b as i64), ("e", e as i64), ("scaled", 1)]),
                        outcome,
                    );
                }
            }
        }
    }
    Ok(report.finish(started))
}

/// Every suite at its default grid.
pub fn verify_all(oracle: &Oracle, zetas: &ZetaTable) -> Result<Vec<VerificationReport>> {
    Suite::ALL.into_iter().map(|s| run_default(s, oracle, zetas)).collect()
}

pub fn run_default(suite: Suite, oracle: &Oracle, zetas: &ZetaTable) -> Result<VerificationReport> {
    match suite {
        Suite::Theorem1 => verify_factorial_step(oracle, &FactorialStepGrid::default()),
        Suite::Theorem2 => verify_scaled_binomial(oracle, zetas, &ScaledBinomialGrid::default()),
        Suite::Theorem3 => verify_offset_limits(oracle, zetas, &OffsetGrid::default()),
        Suite::LemmaMultiset => verify_unit_multiset(&MultisetGrid::default()),
        Suite::Gauss => verify_gauss_products(&GaussGrid::default()),
        Suite::NuFormulas => verify_nu_formulas(&NuFormulaGrid::default()),
    }
}
