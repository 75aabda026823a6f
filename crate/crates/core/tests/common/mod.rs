//! Randomized properties of `PadicApprox`, shared by the property tests and
//! the acceptance run (which uses many more cases).
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use padic_binom::{PadicApprox, Prime};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn prime() -> impl Strategy<Value = Prime> {
    proptest::sample::select(PRIMES.to_vec()).prop_map(|q| Prime::new(q).unwrap())
}

/// `n / p^s` with `|n| <= 10^4`, `s <= 3`, carried to `precision` unit digits.
pub fn element(p: Prime, precision: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = PadicApprox> {
    (-10_000i64..=10_000, 0u32..=3, precision).prop_map(move |(n, s, m)| {
        PadicApprox::from_ratio(&BigInt::from(n), &BigInt::from(p.get().pow(s)), p, m).unwrap()
    })
}

fn triple(precision: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = (PadicApprox, PadicApprox, PadicApprox)> {
    prime().prop_flat_map(move |p| {
        (element(p, precision.clone()), element(p, precision.clone()), element(p, precision.clone()))
    })
}

/// Agreement to every digit known on both sides.
pub fn agree(x: &PadicApprox, y: &PadicApprox) -> bool {
    match [x.absolute_precision(), y.absolute_precision()].into_iter().flatten().min() {
        None => x == y,
        Some(t) => x.congruent_mod(y, t).unwrap(),
    }
}

fn check(ok: bool, what: &str, xs: &[&PadicApprox]) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        let shown: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        Err(TestCaseError::fail(format!("{what} fails for {shown:?}")))
    }
}

fn report<T: std::fmt::Debug>(result: Result<(), TestError<T>>) -> Result<(), String> {
    result.map_err(|e| e.to_string())
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&triple(1..=12), |(x, y, z)| {
        let p = x.prime();
        let zero = PadicApprox::zero(p);
        let one = PadicApprox::from_i64(1, p, 40).unwrap();
        let xs = [&x, &y, &z];
        check(agree(&x.add(&y).unwrap(), &y.add(&x).unwrap()), "x+y = y+x", &xs)?;
        check(agree(&x.mul(&y).unwrap(), &y.mul(&x).unwrap()), "xy = yx", &xs)?;
        let l = x.add(&y).unwrap().add(&z).unwrap();
        let r = x.add(&y.add(&z).unwrap()).unwrap();
        check(agree(&l, &r), "(x+y)+z = x+(y+z)", &xs)?;
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        check(agree(&l, &r), "(xy)z = x(yz)", &xs)?;
        let l = x.mul(&y.add(&z).unwrap()).unwrap();
        let r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        check(agree(&l, &r), "x(y+z) = xy+xz", &xs)?;
        check(x.add(&zero).unwrap() == x, "x+0 = x", &xs)?;
        check(agree(&x.mul(&one).unwrap(), &x), "x·1 = x", &xs)?;
        check(agree(&x.add(&x.neg()).unwrap(), &zero), "x+(-x) = 0", &xs)?;
        Ok(())
    }))
}

pub fn inverses(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&triple(1..=12), |(x, y, _)| {
        let p = x.prime();
        if x.is_exact_zero() {
            check(x.invert().is_err(), "0 has no inverse", &[&x])?;
            return Ok(());
        }
        let m = x.unit_precision().unwrap();
        let inv = x.invert().unwrap();
        check(inv.finite_valuation() == x.finite_valuation().map(|v| -v), "ν(1/x) = -ν(x)", &[&x])?;
        let unit = x.mul(&inv).unwrap();
        check(unit == PadicApprox::from_i64(1, p, m).unwrap(), "x·(1/x) = 1", &[&x, &inv])?;
        check(inv.invert().unwrap() == x, "1/(1/x) = x", &[&x])?;
        if !y.is_exact_zero() {
            let q = x.div(&y).unwrap();
            check(agree(&q.mul(&y).unwrap(), &x), "(x/y)·y = x", &[&x, &y])?;
        }
        Ok(())
    }))
}

pub fn digit_round_trip(cases: u32) -> Result<(), String> {
    let strategy = prime().prop_flat_map(|p| element(p, 1..=40));
    report(runner(cases).run(&strategy, |x| {
        let digits = x.to_digits().unwrap();
        check(PadicApprox::from_digits(&digits).unwrap() == x, "from_digits ∘ to_digits", &[&x])?;
        let json = serde_json::to_string(&digits).unwrap();
        let back = serde_json::from_str(&json).unwrap();
        check(digits == back, "JSON round trip", &[&x])?;
        Ok(())
    }))
}

pub fn ultrametric(cases: u32) -> Result<(), String> {
    // one precision, with enough digits that a nonzero difference of two
    // samples is always visible
    report(runner(cases).run(&triple(40..=40), |(x, y, z)| {
        let xz = x.distance(&z).unwrap();
        let bound = x.distance(&y).unwrap().max(y.distance(&z).unwrap());
        check(xz <= bound, "d(x,z) <= max(d(x,y), d(y,z))", &[&x, &y, &z])?;
        check(xz.is_zero() == (x == z), "d(x,z) = 0 iff x = z", &[&x, &z])?;
        Ok(())
    }))
}

pub fn integer_embedding(cases: u32) -> Result<(), String> {
    let strategy = (prime(), -10_000i64..=10_000, -10_000i64..=10_000, 1u32..=20);
    report(runner(cases).run(&strategy, |(p, n, k, m)| {
        let embed = |v: i64| PadicApprox::from_i64(v, p, m).unwrap();
        let (x, y) = (embed(n), embed(k));
        check(agree(&embed(n * k), &x.mul(&y).unwrap()), "[nk] = [n][k]", &[&x, &y])?;
        check(agree(&embed(n + k), &x.add(&y).unwrap()), "[n+k] = [n]+[k]", &[&x, &y])?;
        Ok(())
    }))
}
