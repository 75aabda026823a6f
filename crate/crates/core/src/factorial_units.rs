//! Unit parts of factorials modulo prime powers and the p-adic constants
//! `z_α = lim (-1)^{pαe} u((α p^e)!)`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{prime_power, DigitExpansion, PadicApprox};
use crate::prime::Prime;
use crate::valuations;

/// Prefix tables larger than this are not materialized.
const TABLE_LIMIT: u64 = 1 << 24;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if (a | b) >> 32 == 0 {
        a * b % m
    } else {
        ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
    }
}

fn word_modulus(p: Prime, m: u32) -> Result<u64> {
    p.get()
        .checked_pow(m)
        .filter(|&q| q < 1 << 63)
        .ok_or(Error::ModulusTooLarge(p.get(), m))
}

/// Product of all units in `[1, p^e)`, reduced mod `p^e`.
///
/// This is `(-1)^p` whenever `p^e > 4`; the product is computed directly so
/// callers can check that.
pub fn gauss_unit_product(p: Prime, e: u32) -> Result<BigUint> {
    let modulus = word_modulus(p, e)?;
    if modulus <= 2 {
        return Ok(BigUint::from(1 % modulus));
    }
    // u and modulus - u are units together, and modulus / 2 is not a unit
    // here, so the product is (-1)^h (prod of the h units below modulus / 2)^2.
    let units = UnitsBelow { q: p.get(), end: (modulus - 1) / 2 };
    let (half, h) = match Montgomery::new(modulus) {
        Some(mont) => mont.product(units),
        None => units.fold((1, 0), |(acc, h), u| (mul_mod(acc, u, modulus), h + 1)),
    };
    let square = mul_mod(half, half, modulus);
    Ok(BigUint::from(if h % 2 == 0 { square } else { modulus - square }))
}

/// The units in `[1, end]`, skipping multiples of `q` without dividing.
struct UnitsBelow {
    q: u64,
    end: u64,
}

impl UnitsBelow {
    fn fold<B>(self, init: B, mut f: impl FnMut(B, u64) -> B) -> B {
        let mut acc = init;
        let mut until_multiple = self.q;
        for u in 1..=self.end {
            until_multiple -= 1;
            if until_multiple == 0 {
                until_multiple = self.q;
            } else {
                acc = f(acc, u);
            }
        }
        acc
    }
}

/// Montgomery reduction with `R = 2^32` for odd moduli below `2^31`.
struct Montgomery {
    n: u64,
    neg_inv: u32,
}

impl Montgomery {
    fn new(n: u64) -> Option<Self> {
        if n.is_multiple_of(2) || n >= 1 << 31 {
            return None;
        }
        let n32 = n as u32;
        let mut inv = n32;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(n32.wrapping_mul(inv)));
        }
        Some(Montgomery { n, neg_inv: inv.wrapping_neg() })
    }

    /// `t / R mod n` for `t < n^2`.
    fn redc(&self, t: u64) -> u64 {
        let m = (t as u32).wrapping_mul(self.neg_inv);
        let r = (t + u64::from(m) * self.n) >> 32;
        if r >= self.n { r - self.n } else { r }
    }

    /// Product of the units and their count; every step divides by `R`, which
    /// is restored once at the end (four extra steps fold the lanes).
    fn product(&self, units: UnitsBelow) -> (u64, u64) {
        // four independent chains so the multiplications overlap
        let mut lanes = [1u64; 4];
        let h = units.fold(0u64, |h, u| {
            let lane = &mut lanes[(h & 3) as usize];
            *lane = self.redc(*lane * u);
            h + 1
        });
        let acc = lanes.iter().fold(1 % self.n, |acc, &l| self.redc(acc * l));
        let r = (1u64 << 32) % self.n;
        let mut scale = 1 % self.n;
        let (mut base, mut exp) = (r, h + 4);
        while exp > 0 {
            if exp & 1 == 1 {
                scale = scale * base % self.n;
            }
            base = base * base % self.n;
            exp >>= 1;
        }
        (acc * scale % self.n, h)
    }
}

/// Partial products of the units below `p^m`.
enum UnitPrefix {
    Table(Vec<u64>),
    OnTheFly,
}

struct UnitProducts {
    p: u64,
    modulus: u64,
    prefix: UnitPrefix,
    full_block: u64,
}

impl UnitProducts {
    fn new(p: Prime, m: u32) -> Result<Self> {
        let modulus = word_modulus(p, m)?;
        let q = p.get();
        let mut this = UnitProducts { p: q, modulus, prefix: UnitPrefix::OnTheFly, full_block: 0 };
        if modulus <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(modulus as usize);
            let mut acc = 1 % modulus;
            table.push(acc);
            for j in 1..modulus {
                if j % q != 0 {
                    acc = mul_mod(acc, j, modulus);
                }
                table.push(acc);
            }
            this.full_block = acc;
            this.prefix = UnitPrefix::Table(table);
        } else {
            this.full_block = this.prefix_product(modulus - 1);
        }
        if modulus > 4 {
            let wilson = if p.is_two() { 1 } else { modulus - 1 };
            debug_assert_eq!(this.full_block, wilson);
        }
        Ok(this)
    }

    /// `Π { j <= r : p ∤ j } mod p^m` for `r < p^m`.
    fn prefix_product(&self, r: u64) -> u64 {
        match &self.prefix {
            UnitPrefix::Table(t) => t[r as usize],
            UnitPrefix::OnTheFly => (1..=r)
                .filter(|j| j % self.p != 0)
                .fold(1 % self.modulus, |acc, j| mul_mod(acc, j, self.modulus)),
        }
    }

    /// `Π { j <= n : p ∤ j } mod p^m`, splitting `n` into full periods.
    fn units_up_to(&self, n: &BigUint) -> u64 {
        let modulus = BigUint::from(self.modulus);
        let blocks = n / &modulus;
        let rest = (n % &modulus).to_u64().expect("remainder below modulus");
        let periodic = BigUint::from(self.full_block)
            .modpow(&blocks, &modulus)
            .to_u64()
            .expect("reduced mod modulus");
        mul_mod(periodic, self.prefix_product(rest), self.modulus)
    }

    /// `u(n!) mod p^m` through `u(n!) = u(⌊n/p⌋!) · Π { j <= n : p ∤ j }`.
    fn unit_factorial(&self, n: &BigUint) -> u64 {
        let p = BigUint::from(self.p);
        let mut n = n.clone();
        let mut acc = 1 % self.modulus;
        while !n.is_zero() {
            acc = mul_mod(acc, self.units_up_to(&n), self.modulus);
            n /= &p;
        }
        acc
    }
}

/// `u(n!) mod p^m` in `O(p^m + log_p n)` multiplications.
pub fn unit_factorial_mod(n: &BigUint, p: Prime, m: u32) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::InvalidPrecision(m));
    }
    let products = UnitProducts::new(p, m)?;
    Ok(BigUint::from(products.unit_factorial(n)))
}

/// Computes `z_α mod p^m` without caching.
///
/// If `p | α` the value of `z_{u(α)}` is returned.
pub fn zeta(alpha: u64, p: Prime, m: u32) -> Result<PadicApprox> {
    if m == 0 {
        return Err(Error::InvalidPrecision(m));
    }
    let unit = unit_alpha(alpha, p)?;
    let e = m.max(p.min_wilson_exponent());
    let n = BigUint::from(unit) * prime_power(p, e);
    let modulus = prime_power(p, e);
    let mut residue = unit_factorial_mod(&n, p, e)?;
    if !p.is_two() && (unit % 2 == 1) && (e % 2 == 1) {
        residue = &modulus - residue;
    }
    PadicApprox::from_unit(p, 0, residue % prime_power(p, m), m)
}

fn unit_alpha(alpha: u64, p: Prime) -> Result<u64> {
    if alpha == 0 {
        return Err(Error::domain("z_α needs α >= 1"));
    }
    let unit = valuations::unit_part(&alpha, p)?;
    if unit != alpha {
        log::debug!("z_{alpha} resolved as z_{unit} for p = {p}");
    }
    Ok(unit)
}

/// Cache key; `alpha` is always coprime to `prime`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZetaKey {
    pub prime: u64,
    pub alpha: u64,
    pub precision: u32,
}

impl ZetaKey {
    /// The `"p:alpha:m"` form used in cache files.
    pub fn encode(&self) -> String {
        format!("{}:{}:{}", self.prime, self.alpha, self.precision)
    }

    fn decode(s: &str) -> Option<Self> {
        let mut parts = s.split(':').map(str::parse::<u64>);
        let key = ZetaKey {
            prime: parts.next()?.ok()?,
            alpha: parts.next()?.ok()?,
            precision: u32::try_from(parts.next()?.ok()?).ok()?,
        };
        parts.next().is_none().then_some(key)
    }
}

/// Cache of `z_α` residues, optionally persisted as one JSON file per prime.
#[derive(Debug, Default)]
pub struct ZetaTable {
    entries: RwLock<BTreeMap<ZetaKey, BigUint>>,
    cache_dir: Option<PathBuf>,
    persist_lock: Mutex<()>,
}

fn cache_err(e: impl std::fmt::Display) -> Error {
    Error::Cache(e.to_string())
}

fn cache_file(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("zeta-p{p}.json"))
}

impl ZetaTable {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a cache directory and loads every file in it.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(cache_err)?;
        let mut entries = BTreeMap::new();
        for file in fs::read_dir(&dir).map_err(cache_err)? {
            let path = file.map_err(cache_err)?.path();
            let is_cache = path
                .file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("zeta-p") && n.ends_with(".json"));
            if is_cache {
                load_file(&path, &mut entries)?;
            }
        }
        Ok(ZetaTable {
            entries: RwLock::new(entries),
            cache_dir: Some(dir),
            persist_lock: Mutex::new(()),
        })
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// A cached `z_α mod p^m`, truncated from any entry of precision `>= m`.
    pub fn get(&self, alpha: u64, p: Prime, m: u32) -> Result<Option<PadicApprox>> {
        let alpha = unit_alpha(alpha, p)?;
        let lo = ZetaKey { prime: p.get(), alpha, precision: m };
        let hi = ZetaKey { precision: u32::MAX, ..lo };
        let entries = self.entries.read().expect("zeta table lock poisoned");
        match entries.range(lo..=hi).next() {
            Some((_, r)) => {
                let r = r % prime_power(p, m);
                PadicApprox::from_unit(p, 0, r, m).map(Some)
            }
            None => Ok(None),
        }
    }

    /// `z_α mod p^m`, computing and caching on a miss.
    pub fn zeta(&self, alpha: u64, p: Prime, m: u32) -> Result<PadicApprox> {
        if m == 0 {
            return Err(Error::InvalidPrecision(m));
        }
        if let Some(hit) = self.get(alpha, p, m)? {
            return Ok(hit);
        }
        let value = zeta(alpha, p, m)?;
        let key = ZetaKey { prime: p.get(), alpha: unit_alpha(alpha, p)?, precision: m };
        let residue = value.unit_residue().expect("z_α is a unit").clone();
        self.entries.write().expect("zeta table lock poisoned").insert(key, residue);
        self.persist(p.get())?;
        Ok(value)
    }

    pub fn entries(&self) -> Vec<(ZetaKey, BigUint)> {
        let entries = self.entries.read().expect("zeta table lock poisoned");
        entries.iter().map(|(k, v)| (*k, v.clone())).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("zeta table lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops every entry, and the cache files if the table is persisted.
    pub fn clear(&self) -> Result<()> {
        let _guard = self.persist_lock.lock().expect("zeta persist lock poisoned");
        let mut entries = self.entries.write().expect("zeta table lock poisoned");
        if let Some(dir) = &self.cache_dir {
            let primes: std::collections::BTreeSet<u64> = entries.keys().map(|k| k.prime).collect();
            for p in primes {
                let path = cache_file(dir, p);
                if path.exists() {
                    fs::remove_file(path).map_err(cache_err)?;
                }
            }
        }
        entries.clear();
        Ok(())
    }

    fn persist(&self, p: u64) -> Result<()> {
        let Some(dir) = &self.cache_dir else {
            return Ok(());
        };
        let _guard = self.persist_lock.lock().expect("zeta persist lock poisoned");
        let prime = Prime::new(p)?;
        let snapshot: BTreeMap<String, DigitExpansion> = {
            let entries = self.entries.read().expect("zeta table lock poisoned");
            entries
                .iter()
                .filter(|(k, _)| k.prime == p)
                .map(|(k, r)| {
                    let value = PadicApprox::from_unit(prime, 0, r.clone(), k.precision)?;
                    Ok((k.encode(), value.to_digits()?))
                })
                .collect::<Result<_>>()?
        };
        let json = serde_json::to_vec_pretty(&snapshot).map_err(cache_err)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(cache_err)?;
        tmp.write_all(&json).map_err(cache_err)?;
        tmp.persist(cache_file(dir, p)).map_err(cache_err)?;
        Ok(())
    }
}

fn load_file(path: &Path, entries: &mut BTreeMap<ZetaKey, BigUint>) -> Result<()> {
    let bytes = fs::read(path).map_err(cache_err)?;
    let map: BTreeMap<String, DigitExpansion> = serde_json::from_slice(&bytes).map_err(cache_err)?;
    for (key, expansion) in map {
        let parsed = ZetaKey::decode(&key)
            .ok_or_else(|| Error::Cache(format!("bad key {key:?} in {}", path.display())))?;
        let value = PadicApprox::from_digits(&expansion)?;
        let consistent = parsed.prime == expansion.prime
            && expansion.start_exponent == 0
            && value.unit_precision() == Some(parsed.precision)
            && parsed.alpha % parsed.prime != 0;
        if !consistent {
            return Err(Error::Cache(format!("entry {key:?} in {} is inconsistent", path.display())));
        }
        entries.insert(parsed, expansion.residue());
    }
    Ok(())
}
