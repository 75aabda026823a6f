//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary (`harness = false`).

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use padic_binom::verify::{
    self, check_pascal_relation, FactorialStepGrid, GaussGrid, MultisetGrid, NuFormulaGrid, OffsetGrid, Oracle,
    ScaledBinomialGrid, VerificationReport,
};
use padic_binom::{gauss_unit_product, zeta, PadicApprox, Prime, ZetaTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

struct Criterion {
    title: &'static str,
    limit: Option<Duration>,
    check: Check,
}

fn prime(q: u64) -> Prime {
    Prime::new(q).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn summarize(report: &VerificationReport) -> Result<String, String> {
    let summary = format!(
        "{} cases, {} boundary, {} failures",
        report.cases_run,
        report.boundary_cases.len(),
        report.failures.len()
    );
    ensure(report.cases_run > 0, || "empty grid".into())?;
    match report.failures.first() {
        None => Ok(summary),
        Some(f) => Err(format!("{summary}; first: {:?} expected {} got {}", f.params, f.expected, f.actual)),
    }
}

/// z_1 against its digit expansion, and against the sign-corrected unit part
/// of `(p^m)!` computed by the naive oracle.
fn zeta_digits(q: u64, m: u32, digits: &[u64], residue: u64) -> Result<String, String> {
    let p = prime(q);
    let z = zeta(1, p, m).map_err(|e| e.to_string())?;
    let expansion = z.to_digits().map_err(|e| e.to_string())?;
    ensure(expansion.digits == digits, || format!("digits {:?}", expansion.digits))?;
    ensure(expansion.residue() == BigUint::from(residue), || format!("residue {}", expansion.residue()))?;

    let modulus = q.pow(m);
    let naive = Oracle::default().unit_factorial(modulus, p, m).map_err(|e| e.to_string())?;
    let flip = q % 2 == 1 && m % 2 == 1;
    let naive = if flip { BigUint::from(modulus) - naive } else { naive };
    ensure(naive == BigUint::from(residue), || format!("oracle gives {naive}"))?;
    Ok(format!("{} = {residue}", expansion.power_sum()))
}

fn criterion_1() -> Result<String, String> {
    let positions = [0, 1, 3, 7, 9, 10, 12];
    let digits: Vec<u64> = (0..15).map(|i| u64::from(positions.contains(&i))).collect();
    zeta_digits(2, 15, &digits, 5771)
}

fn criterion_2() -> Result<String, String> {
    zeta_digits(3, 11, &[1, 2, 2, 0, 2, 0, 1, 2, 2, 0, 0], 18412)
}

fn criterion_3() -> Result<String, String> {
    let grid = FactorialStepGrid { primes: vec![(2, 12), (3, 7), (5, 5)], max_alpha: 9 };
    summarize(&verify::verify_factorial_step(&Oracle::default(), &grid).map_err(|e| e.to_string())?)
}

fn criterion_4() -> Result<String, String> {
    let grid = ScaledBinomialGrid { primes: vec![2, 3], max_a: 8, max_e: None };
    let report = verify::verify_scaled_binomial(&Oracle::default(), &ZetaTable::in_memory(), &grid)
        .map_err(|e| e.to_string())?;
    summarize(&report)
}

fn offset_grid() -> OffsetGrid {
    let pairs = vec![(2, 1), (3, 2), (5, 2)];
    let mut with_31 = pairs.clone();
    with_31.push((3, 1));
    OffsetGrid { cells: vec![(2, pairs), (3, with_31)], offset_range: -4..=4, precision: 6 }
}

fn criterion_5() -> Result<String, String> {
    let report = verify::verify_offset_limits(&Oracle::default(), &ZetaTable::in_memory(), &offset_grid())
        .map_err(|e| e.to_string())?;
    let summary = summarize(&report)?;
    let refused: Vec<String> = report.boundary_cases.iter().map(|b| format!("{:?}: {}", b.params, b.note)).collect();
    Ok(if refused.is_empty() { summary } else { format!("{summary} ({})", refused.join("; ")) })
}

fn criterion_6() -> Result<String, String> {
    let grid = NuFormulaGrid { primes: vec![2, 3, 5, 7], max_a: 2000, scaled_max_a: 30, scaled_max_e: 6 };
    summarize(&verify::verify_nu_formulas(&grid).map_err(|e| e.to_string())?)
}

fn criterion_7() -> Result<String, String> {
    let grid = MultisetGrid { primes: vec![2, 3, 5], max_alpha: 4, max_modulus: 243 };
    summarize(&verify::verify_unit_multiset(&grid).map_err(|e| e.to_string())?)
}

fn criterion_8() -> Result<String, String> {
    let grid = GaussGrid { max_modulus: 1_000_000, max_prime: 1_000_000 };
    let report = verify::verify_gauss_products(&grid).map_err(|e| e.to_string())?;
    let summary = summarize(&report)?;
    let mut moduli: Vec<i64> =
        report.boundary_cases.iter().map(|b| b.params["p"].pow(b.params["e"] as u32)).collect();
    moduli.sort_unstable();
    ensure(moduli == [2, 3, 4], || format!("boundary moduli {moduli:?}"))?;
    let four = gauss_unit_product(prime(2), 2).map_err(|e| e.to_string())?;
    ensure(four == BigUint::from(3u8), || format!("product below 4 is {four}"))?;
    Ok(format!("{summary}; product of units below 4 is 3"))
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    for _ in 0..20 {
        let q = [2, 3, 5, 7][rng.gen_range(0..4)];
        let random = |rng: &mut ChaCha8Rng| {
            let num = BigInt::from(rng.gen_range(1..=1_000_000i64) * if rng.gen() { 1 } else { -1 });
            let den = BigInt::from(rng.gen_range(1..=1000i64));
            PadicApprox::from_ratio(&num, &den, prime(q), 24).unwrap()
        };
        let (big_a, r) = (random(&mut rng), random(&mut rng));
        let failures = check_pascal_relation(&big_a, &r, -6..=6).map_err(|e| e.to_string())?;
        ensure(failures.is_empty(), || format!("A={big_a}, r={r}: {:?}", failures[0]))?;
    }
    let report = verify::verify_pascal_instantiation(&ZetaTable::in_memory(), &offset_grid())
        .map_err(|e| e.to_string())?;
    Ok(format!("20 random (A, r) on [-6, 6]^2; instantiation {}", summarize(&report)?))
}

fn criterion_10() -> Result<String, String> {
    const CASES: u32 = 10_000;
    common::ring_axioms(CASES)?;
    common::inverses(CASES)?;
    common::digit_round_trip(CASES)?;
    common::ultrametric(CASES)?;
    Ok(format!("{CASES} cases each: ring axioms, inverses, digit round trip, ultrametric"))
}

fn main() {
    let criteria = [
        Criterion { title: "z_1 digits, p = 2", limit: Some(Duration::from_secs(5)), check: criterion_1 },
        Criterion { title: "z_1 digits, p = 3", limit: Some(Duration::from_secs(60)), check: criterion_2 },
        Criterion { title: "factorial step grid", limit: Some(Duration::from_secs(300)), check: criterion_3 },
        Criterion { title: "scaled binomial grid", limit: None, check: criterion_4 },
        Criterion { title: "offset limit grid", limit: None, check: criterion_5 },
        Criterion { title: "valuation formulas", limit: Some(Duration::from_secs(120)), check: criterion_6 },
        Criterion { title: "unit-part multiset", limit: None, check: criterion_7 },
        Criterion { title: "Gauss unit product", limit: None, check: criterion_8 },
        Criterion { title: "Pascal closed form", limit: None, check: criterion_9 },
        Criterion { title: "p-adic property suite", limit: None, check: criterion_10 },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let started = Instant::now();
        let mut result = (c.check)();
        let elapsed = started.elapsed();
        if let (Ok(_), Some(limit)) = (&result, c.limit) {
            if elapsed > limit {
                result = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let (verdict, detail) = match &result {
            Ok(detail) => ("PASS", detail),
            Err(detail) => {
                failed += 1;
                ("FAIL", detail)
            }
        };
        println!("criterion {:>2} {verdict}  {:<24} {:>9.2?}  {detail}", i + 1, c.title, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
