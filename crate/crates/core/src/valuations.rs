//! Integer-level valuation primitives: `ν_p`, unit parts, base-`p` digit
//! sums, and the two closed forms for the valuation of a binomial
//! coefficient.
//!
//! Everything here is generic over the integer type, so the same code serves
//! machine words in hot loops and [`num_bigint::BigUint`] /
//! [`num_bigint::BigInt`] where values outgrow 64 bits.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::prime::Prime;

/// Integer types the valuation routines accept.
pub trait Scalar: Integer + Clone + From<u64> + ToPrimitive {}

impl<T: Integer + Clone + From<u64> + ToPrimitive> Scalar for T {}

/// `n = p^valuation * unit_part` with `p ∤ unit_part`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationResult<T> {
    pub valuation: u64,
    pub unit_part: T,
}

fn check_positive<T: Scalar>(n: &T) -> Result<()> {
    if n.is_zero() {
        Err(Error::UndefinedValuation)
    } else if *n < T::zero() {
        Err(Error::domain("valuation is only defined here for positive integers"))
    } else {
        Ok(())
    }
}

/// Splits `n >= 1` into its `p`-power and unit part.
pub fn split<T: Scalar>(n: &T, p: Prime) -> Result<ValuationResult<T>> {
    check_positive(n)?;
    let p = T::from(p.get());
    let mut unit = n.clone();
    let mut valuation = 0;
    loop {
        let (q, r) = unit.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        unit = q;
        valuation += 1;
    }
    Ok(ValuationResult { valuation, unit_part: unit })
}

/// Largest `t` with `p^t | n`.
pub fn nu<T: Scalar>(n: &T, p: Prime) -> Result<u64> {
    split(n, p).map(|s| s.valuation)
}

/// `n / p^{ν(n)}`.
pub fn unit_part<T: Scalar>(n: &T, p: Prime) -> Result<T> {
    split(n, p).map(|s| s.unit_part)
}

/// Little-endian base-`p` digits of `n >= 0` (empty for zero).
pub fn digits<T: Scalar>(n: &T, p: Prime) -> Vec<u64> {
    let p_t = T::from(p.get());
    let mut n = n.clone();
    let mut out = Vec::new();
    while n > T::zero() {
        let (q, r) = n.div_rem(&p_t);
        out.push(r.to_u64().expect("digit is below p"));
        n = q;
    }
    out
}

/// Sum of the base-`p` digits of `n >= 0`.
pub fn digit_sum<T: Scalar>(n: &T, p: Prime) -> u64 {
    digits(n, p).iter().sum()
}

/// `ν_p(n!)` via `(n - d_p(n)) / (p - 1)`.
pub fn nu_factorial<T: Scalar>(n: &T, p: Prime) -> T {
    let s = T::from(digit_sum(n, p));
    (n.clone() - s) / T::from(p.get() - 1)
}

/// `ν_p(n!)` as `Σ_{i≥1} ⌊n/p^i⌋`; an independent route to [`nu_factorial`].
pub fn nu_factorial_floor_sum<T: Scalar>(n: &T, p: Prime) -> T {
    let p = T::from(p.get());
    let mut total = T::zero();
    let mut q = n.div_floor(&p);
    while !q.is_zero() {
        total = total + q.clone();
        q = q.div_floor(&p);
    }
    total
}

fn check_binom_range<T: Scalar>(a: &T, b: &T) -> Result<()> {
    if *b < T::zero() || b > a {
        Err(Error::domain("binomial valuation needs 0 <= b <= a"))
    } else {
        Ok(())
    }
}

/// `ν_p(C(a, b)) = (d_p(b) + d_p(a-b) - d_p(a)) / (p - 1)`.
pub fn nu_binom_legendre<T: Scalar>(a: &T, b: &T, p: Prime) -> Result<u64> {
    check_binom_range(a, b)?;
    let rest = a.clone() - b.clone();
    let num = digit_sum(b, p) + digit_sum(&rest, p) - digit_sum(a, p);
    Ok(num / (p.get() - 1))
}

/// `ν_p(C(a, b))` as the number of carries when adding `b` and `a - b` in
/// base `p`.
pub fn nu_binom_kummer<T: Scalar>(a: &T, b: &T, p: Prime) -> Result<u64> {
    check_binom_range(a, b)?;
    let rest = a.clone() - b.clone();
    let x = digits(b, p);
    let y = digits(&rest, p);
    let mut carry = 0;
    let mut carries = 0;
    for i in 0..x.len().max(y.len()) {
        let s = x.get(i).copied().unwrap_or(0) + y.get(i).copied().unwrap_or(0) + carry;
        carry = u64::from(s >= p.get());
        carries += carry;
    }
    Ok(carries)
}

/// Whether `ν(C(a p^e, b p^e)) = ν(C(a, b))`.
pub fn nu_binom_scaled_invariance_check<T: Scalar>(a: &T, b: &T, p: Prime, e: u32) -> Result<bool> {
    let scale = num_traits::pow(T::from(p.get()), e as usize);
    let base = nu_binom_legendre(a, b, p)?;
    let scaled = nu_binom_legendre(&(a.clone() * scale.clone()), &(b.clone() * scale), p)?;
    Ok(base == scaled)
}
