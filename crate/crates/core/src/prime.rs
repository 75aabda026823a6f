use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted anywhere in the crate.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// A rational prime below 2^31, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p <= MAX_PRIME && is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// Smallest `e >= 1` with `p^e > 4`.
    pub fn min_wilson_exponent(self) -> u32 {
        match self.0 {
            2 => 3,
            3 => 2,
            _ => 1,
        }
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic trial division; fine for the supported range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}
