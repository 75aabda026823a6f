//! Limits of `C(a p^e + c, b p^e + d)` as `e → ∞`.
//!
//! The base limit `C(a p^∞, b p^∞)` is `p^{ν C(a,b)}` times a signed
//! quotient of `z` constants; integer offsets multiply it by a generalized
//! binomial and, for a negative top offset, by `(a-b)/a` or `b/a`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factorial_units::ZetaTable;
use crate::padic::PadicApprox;
use crate::prime::Prime;
use crate::valuations;

/// A pair `(a, b)` after removing the common power of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizedPair {
    pub a: u64,
    pub b: u64,
    /// Power of `p` divided out of both inputs.
    pub shift: u64,
    /// `max(ν(a), ν(b))`; the other valuation is zero.
    pub k: u64,
    /// Whichever of `a`, `b` carries the valuation `k` (`a` when `k = 0`).
    /// Only its parity matters, through the sign `(-1)^{p · sign_base · k}`.
    pub sign_base: u64,
}

impl NormalizedPair {
    /// Whether the limit picks up a factor of `-1`.
    pub fn negated(&self, p: Prime) -> bool {
        !p.is_two() && (self.sign_base % 2 == 1) && (self.k % 2 == 1)
    }
}

/// Checks `1 <= b < a` and `ν(a - b) = 0`, after dividing out
/// `p^{min(ν(a), ν(b))}` (which reindexes the same integer sequence).
pub fn validate_pair(a: u64, b: u64, p: Prime) -> Result<NormalizedPair> {
    if a == 0 || b == 0 {
        return Err(Error::domain("need a, b >= 1"));
    }
    if a == b {
        return Err(Error::DegeneratePair(a));
    }
    let shift = valuations::nu(&a, p)?.min(valuations::nu(&b, p)?);
    let scale = p.get().pow(shift as u32);
    let (na, nb) = (a / scale, b / scale);
    if shift > 0 {
        log::info!("normalized (a, b) = ({a}, {b}) to ({na}, {nb}) for p = {p}");
    }
    if nb > na {
        return Err(Error::HypothesisViolation(format!("need b <= a, got a = {na}, b = {nb}")));
    }
    let diff_nu = valuations::nu(&(na - nb), p)?;
    if diff_nu > 0 {
        log::info!("refused (a, b) = ({na}, {nb}) for p = {p}: ν(a−b) = {diff_nu}");
        return Err(Error::HypothesisViolation(format!("ν(a−b)={diff_nu}, need ν(a−b)=0")));
    }
    let (va, vb) = (valuations::nu(&na, p)?, valuations::nu(&nb, p)?);
    let k = va.max(vb);
    let sign_base = if va == k { na } else { nb };
    Ok(NormalizedPair { a: na, b: nb, shift, k, sign_base })
}

/// Validated request for `C(a p^∞ + c, b p^∞ + d)` to `precision` unit digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomQuery {
    pub prime: Prime,
    pub a: u64,
    pub b: u64,
    pub c: i64,
    pub d: i64,
    pub precision: u32,
}

impl BinomQuery {
    pub fn new(prime: Prime, a: u64, b: u64, c: i64, d: i64, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidPrecision(precision));
        }
        validate_pair(a, b, prime)?;
        Ok(BinomQuery { prime, a, b, c, d, precision })
    }

    pub fn pair(&self) -> Result<NormalizedPair> {
        validate_pair(self.a, self.b, self.prime)
    }

    pub fn case(&self) -> OffsetCase {
        OffsetCase::classify(self.c, self.d)
    }
}

/// Which closed form applies to the offsets `(c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetCase {
    /// `c >= 0` and `d >= 0`: `B · C(c, d)`.
    NonNegative,
    /// `c < 0 <= d`: `B · C(c, d) · (a-b)/a`.
    NegativeTop,
    /// `c < 0 <= c - d`: `B · C(c, c-d) · b/a`.
    Reflected,
    /// Every other `(c, d)`: the limit is `0`.
    Vanishing,
}

impl OffsetCase {
    pub fn classify(c: i64, d: i64) -> Self {
        if c >= 0 && d >= 0 {
            OffsetCase::NonNegative
        } else if c < 0 && d >= 0 {
            OffsetCase::NegativeTop
        } else if c < 0 && c - d >= 0 {
            OffsetCase::Reflected
        } else {
            OffsetCase::Vanishing
        }
    }

    /// The generalized binomial this case multiplies by.
    pub fn binomial(self, c: i64, d: i64) -> BigInt {
        match self {
            OffsetCase::NonNegative | OffsetCase::NegativeTop => generalized_binom(c, d),
            OffsetCase::Reflected => generalized_binom(c, c - d),
            OffsetCase::Vanishing => BigInt::zero(),
        }
    }
}

impl fmt::Display for OffsetCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OffsetCase::NonNegative => "c, d >= 0: B·C(c,d)",
            OffsetCase::NegativeTop => "c < 0 <= d: B·C(c,d)·(a−b)/a",
            OffsetCase::Reflected => "c < 0 <= c−d: B·C(c,c−d)·b/a",
            OffsetCase::Vanishing => "otherwise: 0",
        })
    }
}

/// `c (c-1) ⋯ (c-d+1) / d!` for `d >= 0`, and `0` for `d < 0`.
pub fn generalized_binom(c: i64, d: i64) -> BigInt {
    if d < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..d {
        // a product of i+1 consecutive integers is divisible by (i+1)!
        acc = acc * BigInt::from(c - i) / BigInt::from(i + 1);
    }
    acc
}

fn base_limit(zetas: &ZetaTable, pair: &NormalizedPair, p: Prime, working: u32) -> Result<PadicApprox> {
    let v = valuations::nu_binom_legendre(&pair.a, &pair.b, p)?;
    let za = zetas.zeta(pair.a, p, working)?;
    let zb = zetas.zeta(pair.b, p, working)?;
    let zab = zetas.zeta(pair.a - pair.b, p, working)?;
    let mut unit = za.div(&zb.mul(&zab)?)?;
    if pair.negated(p) {
        unit = unit.neg();
    }
    let scale = PadicApprox::from_unit(p, v as i64, 1u8.into(), working)?;
    unit.mul(&scale)
}

/// `C(a p^∞, b p^∞)` to `m` unit digits.
pub fn binom_inf(zetas: &ZetaTable, a: u64, b: u64, p: Prime, m: u32) -> Result<PadicApprox> {
    if m == 0 {
        return Err(Error::InvalidPrecision(m));
    }
    let pair = validate_pair(a, b, p)?;
    base_limit(zetas, &pair, p, m)
}

/// `C(a p^∞ + c, b p^∞ + d)` to `q.precision` unit digits.
pub fn binom_inf_offset(zetas: &ZetaTable, q: &BinomQuery) -> Result<PadicApprox> {
    let p = q.prime;
    let pair = q.pair()?;
    let case = q.case();
    let binomial = case.binomial(q.c, q.d);
    if binomial.is_zero() {
        return Ok(PadicApprox::zero(p));
    }
    let extra = valuations::nu(&binomial.magnitude().clone(), p)?
        + valuations::nu_binom_legendre(&pair.a, &pair.b, p)?
        + valuations::nu(&pair.a, p)?
        + 1;
    let working = q.precision + u32::try_from(extra).map_err(|_| Error::domain("offsets too large"))?;

    let limit = base_limit(zetas, &pair, p, working)?;
    let mut value = limit.mul(&PadicApprox::from_integer(&binomial, p, working)?)?;
    let (a, b) = (BigInt::from(pair.a), BigInt::from(pair.b));
    match case {
        OffsetCase::NegativeTop => {
            value = value.mul(&PadicApprox::from_ratio(&(&a - &b), &a, p, working)?)?;
        }
        OffsetCase::Reflected => {
            value = value.mul(&PadicApprox::from_ratio(&b, &a, p, working)?)?;
        }
        OffsetCase::NonNegative | OffsetCase::Vanishing => {}
    }
    let value = value.ensure_integral()?;
    value.reduce_precision(q.precision)
}

/// Closed form of the function `f` on `Z × Z` obeying Pascal's rule with
/// `f(0, d) = A·δ_{0,d}` and `f(c, 0) = A·r` for `c < 0`.
pub fn pascal_closed_form(big_a: &PadicApprox, r: &PadicApprox, c: i64, d: i64) -> Result<PadicApprox> {
    let p = big_a.prime();
    if r.prime() != p {
        return Err(Error::MixedPrimes(p.get(), r.prime().get()));
    }
    let working = [big_a.unit_precision(), r.unit_precision()]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(1);
    let case = OffsetCase::classify(c, d);
    let binomial = PadicApprox::from_integer(&case.binomial(c, d), p, working)?;
    let scaled = big_a.mul(&binomial)?;
    match case {
        OffsetCase::NonNegative | OffsetCase::Vanishing => Ok(scaled),
        OffsetCase::NegativeTop => scaled.mul(r),
        OffsetCase::Reflected => {
            let one = PadicApprox::from_i64(1, p, working)?;
            scaled.mul(&one.sub(r)?)
        }
    }
}
