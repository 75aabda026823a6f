//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failures or other runtime errors,
//! 2 usage, 3 hypothesis violation, 4 oracle guard exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::factorial_units::ZetaTable;
use crate::infinite_binom::{binom_inf_offset, BinomQuery};
use crate::padic::{DigitExpansion, PadicApprox};
use crate::prime::Prime;
use crate::verify::{self, Oracle, Suite, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "padic-binom", version, about = "p-adic limits of factorial unit parts and binomial coefficients")]
pub struct Cli {
    /// The prime p.
    #[arg(long = "p", global = true, default_value_t = 2)]
    pub prime: u64,

    /// Number of p-adic unit digits to produce.
    #[arg(long, global = true, default_value_t = 10)]
    pub precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Directory for the persistent z_α cache; in-memory when absent.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[arg(short, long, global = true)]
    pub verbose: bool,

    /// Lift the oracle size guard.
    #[arg(long, global = true)]
    pub force: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digits of z_α modulo p^precision.
    Zeta { alpha: u64 },
    /// The limit of C(a p^e + c, b p^e + d) as e grows.
    #[command(allow_negative_numbers = true)]
    Binom {
        a: u64,
        b: u64,
        #[arg(default_value_t = 0)]
        c: i64,
        #[arg(default_value_t = 0)]
        d: i64,
    },
    /// Run a verification suite: theorem1, theorem2, theorem3,
    /// lemma-multiset, gauss, nu-formulas or all.
    Verify {
        suite: String,
        /// Primes to use instead of each suite's default list.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Largest exponent e for the exponent-indexed grids.
        #[arg(long)]
        max_exponent: Option<u32>,
    },
    /// Inspect or clear the z_α cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CacheAction {
    List,
    Clear,
}

/// Validated global options.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub prime: Prime,
    pub precision: u32,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub verbose: bool,
    pub force: bool,
}

impl CliConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let prime = Prime::new(cli.prime)?;
        if cli.precision == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        Ok(CliConfig {
            prime,
            precision: cli.precision,
            format: cli.format,
            cache_dir: cli.cache_dir.clone(),
            verbose: cli.verbose,
            force: cli.force,
        })
    }

    fn zetas(&self) -> Result<ZetaTable, Error> {
        match &self.cache_dir {
            Some(dir) => ZetaTable::open(dir),
            None => Ok(ZetaTable::in_memory()),
        }
    }

    fn oracle(&self) -> Oracle {
        Oracle { force: self.force, ..Oracle::default() }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidPrime(_) | Error::InvalidPrecision(_) | Error::Domain(_) => EXIT_USAGE,
        Error::HypothesisViolation(_) | Error::DegeneratePair(_) => EXIT_HYPOTHESIS,
        Error::OracleTooLarge { .. } => EXIT_GUARD,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let config = CliConfig::from_cli(cli)?;
    match &cli.command {
        Command::Zeta { alpha } => cmd_zeta(&config, *alpha, out),
        Command::Binom { a, b, c, d } => cmd_binom(&config, (*a, *b, *c, *d), out, err),
        Command::Verify { suite, primes, max_exponent } => {
            cmd_verify(&config, suite, primes.as_deref(), *max_exponent, out, err)
        }
        Command::Cache { action } => cmd_cache(&config, *action, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Cache(format!("output: {e}"))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value).map_err(|e| Error::Cache(e.to_string()))
}

pub fn cmd_zeta(config: &CliConfig, alpha: u64, out: &mut dyn Write) -> Result<i32, Error> {
    let zetas = config.zetas()?;
    let z = zetas.zeta(alpha, config.prime, config.precision)?;
    let digits = z.to_digits()?;
    match config.format {
        Format::Json => writeln!(out, "{}", json(&digits)?).map_err(io)?,
        Format::Text => writeln!(
            out,
            "z_{alpha} = {} (mod {}^{}) = {}",
            digits.power_sum(),
            config.prime,
            config.precision,
            digits.residue()
        )
        .map_err(io)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_binom(
    config: &CliConfig,
    (a, b, c, d): (u64, u64, i64, i64),
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let query = BinomQuery::new(config.prime, a, b, c, d, config.precision)?;
    let zetas = config.zetas()?;
    let value = binom_inf_offset(&zetas, &query)?;
    if config.verbose {
        let pair = query.pair()?;
        if pair.shift > 0 {
            writeln!(err, "normalized (a, b) = ({a}, {b}) to ({}, {})", pair.a, pair.b).map_err(io)?;
        }
        writeln!(err, "case: {}", query.case()).map_err(io)?;
    }
    render_value(config.format, &value, out)?;
    Ok(EXIT_OK)
}

fn render_value(format: Format, value: &PadicApprox, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        Format::Json => {
            let digits: DigitExpansion = value.to_digits()?;
            writeln!(out, "{}", json(&digits)?).map_err(io)
        }
        Format::Text => writeln!(out, "{value}").map_err(io),
    }
}

pub fn cmd_verify(
    config: &CliConfig,
    suite: &str,
    primes: Option<&[u64]>,
    max_exponent: Option<u32>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    if let Some(ps) = primes {
        for &p in ps {
            Prime::new(p)?;
        }
    }
    let oracle = config.oracle();
    let zetas = config.zetas()?;
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, &oracle, &zetas, primes, max_exponent))
        .collect::<Result<Vec<_>, Error>>()?;
    match config.format {
        Format::Json => writeln!(out, "{}", json(&reports)?).map_err(io)?,
        Format::Text => {
            write!(out, "{}", verify::render_text(&reports)).map_err(io)?;
            for r in &reports {
                writeln!(err, "{}: {:.2?}", r.suite, r.elapsed).map_err(io)?;
            }
        }
    }
    Ok(if reports.iter().all(VerificationReport::passed) { EXIT_OK } else { EXIT_FAILURE })
}

fn run_suite(
    suite: Suite,
    oracle: &Oracle,
    zetas: &ZetaTable,
    primes: Option<&[u64]>,
    max_exponent: Option<u32>,
) -> Result<VerificationReport, Error> {
    let primes = match primes {
        Some(list) => list.to_vec(),
        None if max_exponent.is_none() => return verify::run_default(suite, oracle, zetas),
        None => default_primes(suite),
    };
    let primes = primes.as_slice();
    match suite {
        Suite::Theorem1 => {
            let mut grid = verify::FactorialStepGrid::default();
            grid.primes = primes
                .iter()
                .map(|&p| {
                    let default_e = grid.primes.iter().find(|(q, _)| *q == p).map_or(4, |&(_, e)| e);
                    (p, max_exponent.unwrap_or(default_e))
                })
                .collect();
            verify::verify_factorial_step(oracle, &grid)
        }
        Suite::Theorem2 => {
            let grid = verify::ScaledBinomialGrid { primes: primes.to_vec(), max_e: max_exponent, ..Default::default() };
            verify::verify_scaled_binomial(oracle, zetas, &grid)
        }
        Suite::Theorem3 => {
            let mut grid = verify::OffsetGrid::default();
            let defaults = grid.cells.clone();
            grid.cells = primes
                .iter()
                .map(|&p| {
                    let pairs = defaults.iter().find(|(q, _)| *q == p).map_or_else(
                        || vec![(2, 1), (3, 2), (5, 2)],
                        |(_, pairs)| pairs.clone(),
                    );
                    (p, pairs)
                })
                .collect();
            verify::verify_offset_limits(oracle, zetas, &grid)
        }
        Suite::LemmaMultiset => {
            let grid = verify::MultisetGrid { primes: primes.to_vec(), ..Default::default() };
            verify::verify_unit_multiset(&grid)
        }
        Suite::Gauss => {
            let max_prime = primes.iter().copied().max().unwrap_or(2);
            verify::verify_gauss_products(&verify::GaussGrid { max_prime, ..Default::default() })
        }
        Suite::NuFormulas => {
            let grid = verify::NuFormulaGrid { primes: primes.to_vec(), ..Default::default() };
            verify::verify_nu_formulas(&grid)
        }
    }
}

fn default_primes(suite: Suite) -> Vec<u64> {
    match suite {
        Suite::Theorem1 => vec![2, 3, 5],
        Suite::Theorem2 | Suite::Theorem3 => vec![2, 3],
        Suite::LemmaMultiset => vec![2, 3, 5],
        Suite::Gauss => vec![verify::GaussGrid::default().max_prime],
        Suite::NuFormulas => vec![2, 3, 5, 7],
    }
}

pub fn cmd_cache(config: &CliConfig, action: CacheAction, out: &mut dyn Write) -> Result<i32, Error> {
    if config.cache_dir.is_none() {
        return Err(Error::domain("the cache commands need --cache-dir"));
    }
    let zetas = config.zetas()?;
    match action {
        CacheAction::List => {
            let entries = zetas.entries();
            match config.format {
                Format::Json => {
                    let map = entries
                        .iter()
                        .map(|(k, r)| {
                            let p = Prime::new(k.prime)?;
                            let digits = PadicApprox::from_unit(p, 0, r.clone(), k.precision)?.to_digits()?;
                            Ok((k.encode(), digits))
                        })
                        .collect::<Result<std::collections::BTreeMap<_, _>, Error>>()?;
                    writeln!(out, "{}", json(&map)?).map_err(io)?;
                }
                Format::Text => {
                    for (k, r) in entries {
                        writeln!(out, "p={} alpha={} m={} residue={r}", k.prime, k.alpha, k.precision).map_err(io)?;
                    }
                }
            }
        }
        CacheAction::Clear => {
            let n = zetas.len();
            zetas.clear()?;
            if config.format == Format::Text {
                writeln!(out, "removed {n} entries").map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}
