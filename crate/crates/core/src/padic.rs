//! Truncated p-adic numbers with explicit precision tracking.
//!
//! A nonzero value is stored as `p^v * u` where the unit `u` is known modulo
//! `p^m`; the absolute precision is `v + m`. Negative valuations are allowed
//! so that quotients like `(a - b) / a` can be carried through intermediate
//! steps. Additive cancellation that eats every known digit yields an
//! explicit [`Valuation::AtLeast`] state instead of a guessed valuation.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::valuations;

/// Valuation of a [`PadicApprox`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    /// Exact zero.
    Infinite,
    /// Zero to every known digit; the true valuation is at least this.
    AtLeast(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Exhausted { absolute_precision: i64 },
    Unit { valuation: i64, residue: BigUint, precision: u32 },
}

/// A p-adic number known to finite precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    prime: Prime,
    repr: Repr,
}

/// Little-endian base-`p` digits starting at `p^start_exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitExpansion {
    pub prime: u64,
    pub start_exponent: i64,
    pub digits: Vec<u64>,
}

pub(crate) fn prime_power(p: Prime, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p.get()), e as usize)
}

/// Inverse of `x` modulo `modulus`, by the extended Euclidean algorithm.
pub(crate) fn mod_inverse(x: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    let x = BigInt::from(x % modulus);
    let m = BigInt::from(modulus.clone());
    let eg = x.extended_gcd(&m);
    if !eg.gcd.is_one() {
        return None;
    }
    eg.x.mod_floor(&m).to_biguint()
}

fn check_precision(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidPrecision(m))
    } else {
        Ok(())
    }
}

fn to_precision(m: i64) -> u32 {
    u32::try_from(m).expect("unit precision fits in u32")
}

impl PadicApprox {
    pub fn zero(prime: Prime) -> Self {
        PadicApprox { prime, repr: Repr::Zero }
    }

    /// Builds `p^valuation * residue` from an already reduced unit residue.
    pub fn from_unit(prime: Prime, valuation: i64, residue: BigUint, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let modulus = prime_power(prime, precision);
        if residue >= modulus || (&residue % prime.get()).is_zero() {
            return Err(Error::domain(format!(
                "{residue} is not a unit residue modulo {}^{precision}",
                prime
            )));
        }
        Ok(PadicApprox { prime, repr: Repr::Unit { valuation, residue, precision } })
    }

    pub fn from_integer(n: &BigInt, prime: Prime, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        if n.is_zero() {
            return Ok(Self::zero(prime));
        }
        let split = valuations::split(n.magnitude(), prime)?;
        let modulus = prime_power(prime, precision);
        let mut residue = split.unit_part % &modulus;
        if n.sign() == Sign::Minus {
            residue = &modulus - residue;
        }
        Ok(PadicApprox {
            prime,
            repr: Repr::Unit { valuation: split.valuation as i64, residue, precision },
        })
    }

    pub fn from_i64(n: i64, prime: Prime, precision: u32) -> Result<Self> {
        Self::from_integer(&BigInt::from(n), prime, precision)
    }

    /// `num / den` with `precision` known unit digits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prime: Prime, precision: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = Self::from_integer(num, prime, precision)?;
        let den = Self::from_integer(den, prime, precision)?;
        num.div(&den)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Exhausted { absolute_precision } => Valuation::AtLeast(*absolute_precision),
            Repr::Unit { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// Finite valuation, if the value is known to be nonzero.
    pub fn finite_valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit { valuation, .. } => Some(*valuation),
            _ => None,
        }
    }

    pub fn unit_residue(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { residue, .. } => Some(residue),
            _ => None,
        }
    }

    pub fn unit_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { precision, .. } => Some(*precision),
            _ => None,
        }
    }

    /// `v + m`, or `None` for an exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Exhausted { absolute_precision } => Some(*absolute_precision),
            Repr::Unit { valuation, precision, .. } => Some(valuation + i64::from(*precision)),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.repr, Repr::Exhausted { .. })
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::MixedPrimes(self.prime.get(), other.prime.get()))
        }
    }

    pub fn neg(&self) -> Self {
        let repr = match &self.repr {
            Repr::Unit { valuation, residue, precision } => Repr::Unit {
                valuation: *valuation,
                residue: prime_power(self.prime, *precision) - residue,
                precision: *precision,
            },
            other => other.clone(),
        };
        PadicApprox { prime: self.prime, repr }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.prime;
        let precision = match (self.absolute_precision(), other.absolute_precision()) {
            (None, None) => return Ok(Self::zero(p)),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let exhausted = PadicApprox { prime: p, repr: Repr::Exhausted { absolute_precision: precision } };

        let terms: Vec<(i64, &BigUint)> = [self, other]
            .into_iter()
            .filter_map(|x| match &x.repr {
                Repr::Unit { valuation, residue, .. } => Some((*valuation, residue)),
                _ => None,
            })
            .collect();
        let Some(base) = terms.iter().map(|t| t.0).min() else {
            return Ok(exhausted);
        };
        if base >= precision {
            return Ok(exhausted);
        }
        let modulus = prime_power(p, to_precision(precision - base));
        let sum = terms
            .iter()
            .fold(BigUint::zero(), |acc, (v, r)| acc + *r * prime_power(p, to_precision(v - base)))
            % &modulus;
        if sum.is_zero() {
            return Ok(exhausted);
        }
        let split = valuations::split(&sum, p)?;
        let valuation = base + split.valuation as i64;
        Ok(PadicApprox {
            prime: p,
            repr: Repr::Unit {
                valuation,
                residue: split.unit_part,
                precision: to_precision(precision - valuation),
            },
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Repr::Zero,
            (Repr::Exhausted { absolute_precision: a }, Repr::Exhausted { absolute_precision: b }) => {
                Repr::Exhausted { absolute_precision: a + b }
            }
            (Repr::Exhausted { absolute_precision: a }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Exhausted { absolute_precision: a }) => {
                Repr::Exhausted { absolute_precision: a + valuation }
            }
            (
                Repr::Unit { valuation: vx, residue: rx, precision: mx },
                Repr::Unit { valuation: vy, residue: ry, precision: my },
            ) => {
                let precision = (*mx).min(*my);
                Repr::Unit {
                    valuation: vx + vy,
                    residue: (rx * ry) % prime_power(self.prime, precision),
                    precision,
                }
            }
        };
        Ok(PadicApprox { prime: self.prime, repr })
    }

    pub fn invert(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Exhausted { .. } => Err(Error::PrecisionExhausted),
            Repr::Unit { valuation, residue, precision } => {
                let modulus = prime_power(self.prime, *precision);
                let inverse = mod_inverse(residue, &modulus).expect("stored residue is a unit");
                Ok(PadicApprox {
                    prime: self.prime,
                    repr: Repr::Unit { valuation: -valuation, residue: inverse, precision: *precision },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        self.mul(&other.invert()?)
    }

    /// `d(x, y) = p^{-ν(x - y)}`, exactly.
    pub fn distance(&self, other: &Self) -> Result<BigRational> {
        self.same_prime(other)?;
        if self == other {
            return Ok(BigRational::zero());
        }
        let diff = self.sub(other)?;
        match diff.repr {
            Repr::Zero => Ok(BigRational::zero()),
            Repr::Exhausted { absolute_precision } => Err(Error::InsufficientPrecision {
                requested: absolute_precision + 1,
                available: absolute_precision,
            }),
            Repr::Unit { valuation, .. } => {
                let scale = BigInt::from(prime_power(self.prime, valuation.unsigned_abs() as u32));
                Ok(if valuation >= 0 {
                    BigRational::new(BigInt::one(), scale)
                } else {
                    BigRational::from_integer(scale)
                })
            }
        }
    }

    /// Keeps `precision` unit digits.
    pub fn reduce_precision(&self, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        match &self.repr {
            Repr::Unit { valuation, residue, precision: m } => {
                if precision > *m {
                    return Err(Error::InsufficientPrecision {
                        requested: i64::from(precision),
                        available: i64::from(*m),
                    });
                }
                Ok(PadicApprox {
                    prime: self.prime,
                    repr: Repr::Unit {
                        valuation: *valuation,
                        residue: residue % prime_power(self.prime, precision),
                        precision,
                    },
                })
            }
            _ => Ok(self.clone()),
        }
    }

    /// Same valuation and unit residues congruent modulo `p^precision`.
    pub fn equal_to_precision(&self, other: &Self, precision: u32) -> Result<bool> {
        self.same_prime(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Exhausted { .. }, _) | (_, Repr::Exhausted { .. }) => Err(Error::PrecisionExhausted),
            (Repr::Zero, Repr::Zero) => Ok(true),
            (Repr::Zero, _) | (_, Repr::Zero) => Ok(false),
            (
                Repr::Unit { valuation: vx, residue: rx, precision: mx },
                Repr::Unit { valuation: vy, residue: ry, precision: my },
            ) => {
                let available = (*mx).min(*my);
                if precision > available {
                    return Err(Error::InsufficientPrecision {
                        requested: i64::from(precision),
                        available: i64::from(available),
                    });
                }
                let modulus = prime_power(self.prime, precision);
                Ok(vx == vy && rx % &modulus == ry % &modulus)
            }
        }
    }

    /// Whether `x ≡ y (mod p^n)` as p-adic numbers.
    ///
    /// Fails only when the difference is zero to every known digit but fewer
    /// than `n` digits are known.
    pub fn congruent_mod(&self, other: &Self, n: i64) -> Result<bool> {
        let diff = self.sub(other)?;
        match diff.repr {
            Repr::Zero => Ok(true),
            Repr::Unit { valuation, .. } => Ok(valuation >= n),
            Repr::Exhausted { absolute_precision } if absolute_precision >= n => Ok(true),
            Repr::Exhausted { absolute_precision } => {
                Err(Error::InsufficientPrecision { requested: n, available: absolute_precision })
            }
        }
    }

    /// Rejects values outside `Z_p`.
    pub fn ensure_integral(self) -> Result<Self> {
        match self.finite_valuation() {
            Some(v) if v < 0 => Err(Error::NonIntegral(v)),
            _ => Ok(self),
        }
    }

    pub fn to_digits(&self) -> Result<DigitExpansion> {
        match &self.repr {
            Repr::Zero => Ok(DigitExpansion { prime: self.prime.get(), start_exponent: 0, digits: vec![] }),
            Repr::Exhausted { .. } => Err(Error::PrecisionExhausted),
            Repr::Unit { valuation, residue, precision } => {
                let mut digits = valuations::digits(residue, self.prime);
                digits.resize(*precision as usize, 0);
                Ok(DigitExpansion { prime: self.prime.get(), start_exponent: *valuation, digits })
            }
        }
    }

    pub fn from_digits(expansion: &DigitExpansion) -> Result<Self> {
        let prime = Prime::new(expansion.prime)?;
        let Some(&lead) = expansion.digits.first() else {
            return Ok(Self::zero(prime));
        };
        if let Some(bad) = expansion.digits.iter().find(|&&d| d >= prime.get()) {
            return Err(Error::domain(format!("digit {bad} out of range for p = {prime}")));
        }
        if lead == 0 {
            return Err(Error::domain("leading digit of a nonzero expansion must be nonzero"));
        }
        let precision = u32::try_from(expansion.digits.len())
            .map_err(|_| Error::domain("digit expansion too long"))?;
        Self::from_unit(prime, expansion.start_exponent, expansion.residue(), precision)
    }
}

impl DigitExpansion {
    /// `Σ c_i p^i` over the stored digits (ignores the start exponent).
    pub fn residue(&self) -> BigUint {
        let p = BigUint::from(self.prime);
        self.digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * &p + d)
    }

    /// Renders the expansion as a sum of prime powers, e.g.
    /// `1 + 2*3 + 2*3^2 + 3^6`.
    pub fn power_sum(&self) -> String {
        let terms: Vec<String> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let exp = self.start_exponent + i as i64;
                let power = match exp {
                    0 => None,
                    1 => Some(self.prime.to_string()),
                    _ => Some(format!("{}^{exp}", self.prime)),
                };
                match (d, power) {
                    (d, None) => d.to_string(),
                    (1, Some(pw)) => pw,
                    (d, Some(pw)) => format!("{d}*{pw}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0 (exact)"),
            Repr::Exhausted { absolute_precision } => {
                write!(f, "0 (mod {}^{absolute_precision})", self.prime)
            }
            Repr::Unit { valuation, residue, precision } => write!(
                f,
                "v={valuation}, unit ≡ {residue} (mod {})",
                prime_power(self.prime, *precision)
            ),
        }
    }
}

/// Signed view of a residue modulo `p^m`, mostly for diagnostics.
pub fn symmetric_residue(x: &PadicApprox) -> Option<BigInt> {
    let residue = x.unit_residue()?;
    let modulus = prime_power(x.prime(), x.unit_precision()?);
    let r = BigInt::from(residue.clone());
    let m = BigInt::from(modulus);
    Some(if &r * 2 > m { r - m } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn unit(prime: u64, v: i64, r: u64, m: u32) -> PadicApprox {
        PadicApprox::from_unit(p(prime), v, BigUint::from(r), m).unwrap()
    }

    fn int(n: i64, prime: u64, m: u32) -> PadicApprox {
        PadicApprox::from_i64(n, p(prime), m).unwrap()
    }

    #[test]
    fn from_integer_canonicalizes() {
        assert_eq!(int(12, 2, 4), unit(2, 2, 3, 4));
        assert!(int(0, 5, 3).is_exact_zero());
        assert_eq!(int(1, 3, 5), unit(3, 0, 1, 5));
        // -1 is the all-(p-1) pattern.
        assert_eq!(int(-1, 3, 4).to_digits().unwrap().digits, vec![2, 2, 2, 2]);
        assert_eq!(int(-12, 2, 3), unit(2, 2, 5, 3));
        assert_eq!(PadicApprox::from_i64(1, p(2), 0), Err(Error::InvalidPrecision(0)));
    }

    #[test]
    fn from_ratio_cases() {
        let r = |n: i64, d: i64, q: u64, m: u32| {
            PadicApprox::from_ratio(&n.into(), &d.into(), p(q), m)
        };
        assert_eq!(r(1, 2, 3, 2), Ok(unit(3, 0, 5, 2)));
        assert_eq!(r(1, 1, 2, 4), Ok(unit(2, 0, 1, 4)));
        assert_eq!(r(2, 4, 2, 3), Ok(unit(2, -1, 1, 3)));
        assert!(r(0, 7, 5, 3).unwrap().is_exact_zero());
        assert_eq!(r(1, 0, 5, 3), Err(Error::DivisionByZero));
    }

    #[test]
    fn addition() {
        let s = unit(2, 0, 1, 3).add(&unit(2, 0, 7, 3)).unwrap();
        assert!(s.is_exhausted());
        assert_eq!(s.valuation(), Valuation::AtLeast(3));

        let x = unit(3, 0, 1, 4);
        assert_eq!(x.add(&PadicApprox::zero(p(3))).unwrap(), x);

        let s = unit(2, 1, 1, 2).add(&unit(2, 0, 1, 3)).unwrap();
        assert_eq!(s, unit(2, 0, 3, 3));
        assert_eq!(s.absolute_precision(), Some(3));

        // cancellation raises the valuation and shrinks the unit precision
        let s = int(5, 3, 4).add(&int(4, 3, 4)).unwrap();
        assert_eq!(s.valuation(), Valuation::Finite(2));
        assert_eq!(s.unit_precision(), Some(2));
    }

    #[test]
    fn mixed_primes_rejected() {
        assert_eq!(int(1, 2, 3).add(&int(1, 3, 3)), Err(Error::MixedPrimes(2, 3)));
        assert_eq!(int(1, 2, 3).mul(&int(1, 3, 3)), Err(Error::MixedPrimes(2, 3)));
    }

    #[test]
    fn multiplication() {
        assert_eq!(unit(2, 0, 3, 3).mul(&unit(2, 0, 3, 3)).unwrap(), unit(2, 0, 1, 3));
        assert!(unit(2, 0, 3, 3).mul(&PadicApprox::zero(p(2))).unwrap().is_exact_zero());
        assert_eq!(unit(5, 2, 1, 2).mul(&unit(5, -2, 1, 2)).unwrap(), unit(5, 0, 1, 2));
        let ex = unit(2, 0, 1, 3).add(&unit(2, 0, 7, 3)).unwrap();
        assert_eq!(ex.mul(&unit(2, 2, 1, 5)).unwrap().valuation(), Valuation::AtLeast(5));
    }

    #[test]
    fn inversion() {
        assert_eq!(unit(2, 0, 3, 3).invert().unwrap(), unit(2, 0, 3, 3));
        assert_eq!(unit(7, 0, 1, 6).invert().unwrap(), unit(7, 0, 1, 6));
        assert_eq!(unit(3, 1, 2, 2).invert().unwrap(), unit(3, -1, 5, 2));
        assert_eq!(PadicApprox::zero(p(3)).invert(), Err(Error::DivisionByZero));
        let ex = unit(2, 0, 1, 3).add(&unit(2, 0, 7, 3)).unwrap();
        assert_eq!(ex.invert(), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn distances() {
        let x = int(1, 2, 6);
        assert_eq!(x.distance(&x.clone()).unwrap(), BigRational::zero());
        assert_eq!(x.distance(&int(65, 2, 7)), Err(Error::InsufficientPrecision { requested: 7, available: 6 }));
        let z = PadicApprox::zero(p(2));
        assert_eq!(z.distance(&z).unwrap(), BigRational::zero());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(int(1, 2, 6).distance(&int(3, 2, 6)).unwrap(), half);
        assert_eq!(int(1, 2, 6).distance(&int(2, 2, 6)).unwrap(), BigRational::one());
        assert_eq!(unit(2, -1, 1, 3).distance(&z).unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn truncation_and_equality() {
        let x = int(5771, 2, 15);
        assert_eq!(x.reduce_precision(15).unwrap(), x);
        assert_eq!(x.reduce_precision(3).unwrap(), unit(2, 0, 3, 3));
        assert!(matches!(x.reduce_precision(16), Err(Error::InsufficientPrecision { .. })));

        let one = int(1, 5, 6);
        let other = int(1 + 125, 5, 6);
        assert_eq!(one.equal_to_precision(&other, 3), Ok(true));
        assert_eq!(one.equal_to_precision(&other, 4), Ok(false));
        assert!(one.equal_to_precision(&other, 7).is_err());
        assert_eq!(int(3, 5, 6).equal_to_precision(&int(15, 5, 6), 1), Ok(false));
    }

    #[test]
    fn congruences() {
        assert_eq!(int(1, 3, 5).congruent_mod(&int(28, 3, 5), 3), Ok(true));
        assert_eq!(int(1, 3, 5).congruent_mod(&int(28, 3, 5), 4), Ok(false));
        assert!(int(1, 3, 2).congruent_mod(&int(10, 3, 2), 5).is_err());
    }

    #[test]
    fn digits_of_z1_mod_2_15() {
        let d = unit(2, 0, 5771, 15).to_digits().unwrap();
        let ones: Vec<usize> = d.digits.iter().enumerate().filter(|(_, &c)| c == 1).map(|(i, _)| i).collect();
        assert_eq!(ones, vec![0, 1, 3, 7, 9, 10, 12]);
        assert_eq!(d.digits.len(), 15);
        assert_eq!(d.power_sum(), "1 + 2 + 2^3 + 2^7 + 2^9 + 2^10 + 2^12");
        assert_eq!(PadicApprox::from_digits(&d).unwrap(), unit(2, 0, 5771, 15));
    }

    #[test]
    fn digit_json_schema() {
        let d = unit(3, 1, 7, 3).to_digits().unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"prime":3,"start_exponent":1,"digits":[1,2,0]}"#);
        assert_eq!(d.power_sum(), "3 + 2*3^2");
        let bad = DigitExpansion { prime: 3, start_exponent: 0, digits: vec![0, 1] };
        assert!(PadicApprox::from_digits(&bad).is_err());
        let bad = DigitExpansion { prime: 3, start_exponent: 0, digits: vec![1, 3] };
        assert!(PadicApprox::from_digits(&bad).is_err());
        let bad = DigitExpansion { prime: 4, start_exponent: 0, digits: vec![1] };
        assert_eq!(PadicApprox::from_digits(&bad), Err(Error::InvalidPrime(4)));
    }

    #[test]
    fn integrality() {
        assert_eq!(unit(2, -1, 1, 3).ensure_integral(), Err(Error::NonIntegral(-1)));
        assert!(unit(2, 0, 1, 3).ensure_integral().is_ok());
        assert_eq!(symmetric_residue(&int(-1, 7, 2)), Some(BigInt::from(-1)));
    }
}
