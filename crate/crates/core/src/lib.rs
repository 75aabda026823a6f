//! p-adic limits of factorial unit parts and binomial coefficients.
//!
//! For a prime `p` and `α` coprime to `p`, the unit parts `u((α p^e)!)`
//! converge p-adically (after a sign correction) to constants `z_α`. The
//! limits `C(a p^∞ + c, b p^∞ + d)` are expressed through these constants.
//! This crate computes both with precision-tracked truncated p-adic
//! arithmetic, and ships brute-force oracles that check every identity
//! involved.

pub mod cli;
pub mod error;
pub mod factorial_units;
pub mod infinite_binom;
pub mod padic;
pub mod prime;
pub mod valuations;
pub mod verify;

pub use error::{Error, Result};
pub use factorial_units::{gauss_unit_product, unit_factorial_mod, zeta, ZetaTable};
pub use infinite_binom::{binom_inf, binom_inf_offset, BinomQuery};
pub use padic::{DigitExpansion, PadicApprox, Valuation};
pub use prime::Prime;

/// Arbitrary-precision signed integers, used for offsets and exact binomials.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision residues and factorial arguments.
pub type Natural = num_bigint::BigUint;
/// Exact distances in `Q`.
pub type Rational = num_rational::BigRational;
