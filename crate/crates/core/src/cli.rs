//! Command-line front end. Exit codes: 0 success, 1 internal failure,
//! 2 hypothesis failure (or an invalid certificate), 64 malformed input.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::angle::Turns;
use crate::certificate::Certificate;
use crate::coeffs::CoefficientSet;
use crate::complex::parse_pair;
use crate::counterexamples::{build_wedge, diagnose_wedge, imag_bound_check, real_bound_check, EvasionConfig, Side};
use crate::engines::verify::verify_certificate;
use crate::engines::{approximate, EngineParams, PrefixConstraint, TheoremChoice};
use crate::error::Error;
use crate::geometry::{classify_lambda, direction_arc};
use crate::oracle::{best_prefix_error, Strategy};
use crate::region::{Piece, RegionSpec};
use crate::sampler::{sample_image, GridSpec, SampleConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "restricted-series", version, about = "Power series with coefficients from a finite set")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TheoremArg {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Direct,
    Mitm,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a certificate that f(τ) lands within eps of the target.
    Approximate {
        /// JSON list of [re,im] pairs, or @FILE.
        #[arg(long)]
        lambda: String,
        /// Boundary point, e.g. `turns:0.1414` or `turns:1/4 exact`.
        #[arg(long)]
        zeta: String,
        /// `disk:<modulus>,<radius>` toward ζ, `disk:[re,im],<radius>`,
        /// `wedge:<re_lo>,<re_hi>,<arg>,<half_angle>`, joined by `;`, or JSON / @FILE.
        #[arg(long)]
        region: Option<String>,
        #[arg(long, default_value = "[0,0]")]
        target: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Fixed leading coefficients, JSON list of [re,im] pairs.
        #[arg(long)]
        prefix: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "auto")]
        theorem: TheoremArg,
        /// Write the engine trace as JSON to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Classify Λ as line-contained, half-plane-contained or spanning.
    Classify {
        #[arg(long)]
        lambda: String,
    },
    /// Counterexample wedge; `--alpha` and `--n` switch to the raw diagnostic.
    Wedge {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value = "minus")]
        side: SideArg,
        #[arg(long, requires = "n")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        n: Option<u64>,
    },
    /// Sampled check that the wedge image avoids a half-plane.
    CheckEvasion {
        /// JSON list of [re,im] pairs (a single value is allowed), or @FILE.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        z_samples: u64,
        #[arg(long, default_value_t = 512)]
        prefix_len: u64,
    },
    /// Exact best prefix error by exhaustive search.
    Oracle {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Random images f(z) and their coverage of a disk.
    Sample {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        region: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// `<re>,<im>,<radius>,<resolution>`.
        #[arg(long, default_value = "0,0,5,100")]
        grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 512)]
        prefix_len: u64,
        /// Write the samples as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Verify {
        #[arg(long)]
        certificate_file: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        region: Option<String>,
    },
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json<T: Serialize>(code: i32, value: &T) -> Outcome {
        match serde_json::to_string(value) {
            Ok(s) => Outcome { code, stdout: s + "\n", stderr: String::new() },
            Err(e) => Outcome::internal(format!("serialization failed: {e}")),
        }
    }

    fn internal(msg: String) -> Outcome {
        Outcome { code: EXIT_INTERNAL, stdout: String::new(), stderr: msg + "\n" }
    }

    fn usage(msg: String) -> Outcome {
        let help = <Cli as clap::CommandFactory>::command().render_usage().to_string();
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n{help}\n") }
    }

    fn from_error(e: Error) -> Outcome {
        if e.is_hypothesis_failure() {
            Outcome::json(EXIT_HYPOTHESIS, &json!({ "reason": e.reason_code(), "message": e.to_string() }))
        } else if matches!(e, Error::InvalidInput(_)) {
            Outcome::usage(e.to_string())
        } else {
            let mut o = Outcome::internal(e.to_string());
            o.stdout = json!({ "reason": e.reason_code(), "message": e.to_string() }).to_string() + "\n";
            o
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(command: Command) -> Outcome {
    match dispatch(command) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(e),
    }
}

fn dispatch(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Approximate { lambda, zeta, region, target, eps, prefix, seed, theorem, trace } => {
            let lambda = parse_lambda(&lambda)?;
            let region = parse_region(region.as_deref(), &parse_zeta(&zeta)?)?;
            let w = parse_complex(&target)?;
            let prefix = match prefix {
                Some(p) => PrefixConstraint::new(parse_values(&p)?),
                None => PrefixConstraint::empty(),
            };
            let choice = match theorem {
                TheoremArg::Auto => TheoremChoice::Auto,
                TheoremArg::One => TheoremChoice::One,
                TheoremArg::Two => TheoremChoice::Two,
                TheoremArg::Three => TheoremChoice::Three,
            };
            let params = EngineParams { seed, ..EngineParams::default() };
            let out = approximate(choice, &lambda, &region, &prefix, w, eps, &params)?;
            if let Some(path) = trace {
                let s = serde_json::to_string_pretty(&out.trace).map_err(|e| Error::VerificationFailed(e.to_string()))?;
                fs::write(&path, s).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(Outcome::json(EXIT_OK, &out.certificate))
        }
        Command::Classify { lambda } => Ok(Outcome::json(EXIT_OK, &classify_lambda(&parse_lambda(&lambda)?))),
        Command::Wedge { k, side, alpha, n } => match (alpha, n) {
            (Some(alpha), Some(n)) => {
                if k < 2 || !(alpha > 0.0) {
                    return Err(Error::invalid("need k >= 2 and alpha > 0"));
                }
                Ok(Outcome::json(EXIT_OK, &diagnose_wedge(k, alpha, n)))
            }
            _ => {
                let side = match side {
                    SideArg::Minus => Side::AtMinusOne,
                    SideArg::Plus => Side::AtPlusOne,
                };
                Ok(Outcome::json(EXIT_OK, &build_wedge(k, side)?))
            }
        },
        Command::CheckEvasion { lambda, k, trials, seed, z_samples, prefix_len } => {
            let values = parse_values(&lambda)?;
            if values.is_empty() {
                return Err(Error::invalid("lambda must not be empty"));
            }
            let cfg = EvasionConfig { trials, z_samples, prefix_len, seed };
            let report = if values.iter().all(|v| v.im == 0.0) {
                imag_bound_check(&values, &build_wedge(k, Side::AtMinusOne)?, &cfg)?
            } else {
                match direction_arc(&values) {
                    Some((_, len)) if len <= std::f64::consts::PI => {}
                    _ => return Err(Error::not_applicable("spanning")),
                }
                real_bound_check(&values, &build_wedge(k, Side::AtPlusOne)?, &cfg)?
            };
            let code = if report.pass { EXIT_OK } else { EXIT_INTERNAL };
            Ok(Outcome::json(code, &report))
        }
        Command::Oracle { lambda, tau, target, length, strategy } => {
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Direct => Strategy::Direct,
                StrategyArg::Mitm => Strategy::MeetInMiddle,
            };
            let r = best_prefix_error(&parse_lambda(&lambda)?, parse_complex(&tau)?, parse_complex(&target)?, length, strategy)?;
            Ok(Outcome::json(EXIT_OK, &r))
        }
        Command::Sample { lambda, zeta, region, trials, grid, seed, prefix_len, csv } => {
            let lambda = parse_lambda(&lambda)?;
            let region = parse_region(region.as_deref(), &parse_zeta(&zeta)?)?;
            let g: Vec<f64> = grid.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>()
                .map_err(|_| Error::invalid(format!("bad grid {grid:?}")))?;
            let [re, im, radius, res] = g[..] else {
                return Err(Error::invalid("grid is <re>,<im>,<radius>,<resolution>"));
            };
            if !(res >= 1.0) || res.fract() != 0.0 {
                return Err(Error::invalid("grid resolution must be a positive integer"));
            }
            let grid = GridSpec::new(Complex64::new(re, im), radius, res as usize)?;
            let cloud = sample_image(&lambda, &region, grid, SampleConfig { prefix_len, trials, seed })?;
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
                cloud.write_csv(file)?;
            }
            Ok(Outcome::json(EXIT_OK, &cloud.summary()))
        }
        Command::Verify { certificate_file, lambda, zeta, region } => {
            let text = fs::read_to_string(&certificate_file)
                .map_err(|e| Error::invalid(format!("cannot read {}: {e}", certificate_file.display())))?;
            let cert: Certificate = serde_json::from_str(&text).map_err(|e| Error::invalid(format!("bad certificate: {e}")))?;
            let region = parse_region(region.as_deref(), &parse_zeta(&zeta)?)?;
            let report = verify_certificate(&parse_lambda(&lambda)?, &cert, &region);
            Ok(Outcome::json(if report.valid { EXIT_OK } else { EXIT_HYPOTHESIS }, &report))
        }
    }
}

/// Inline text or the contents of `@FILE`.
fn inline_or_file(s: &str) -> Result<String, Error> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn parse_values(s: &str) -> Result<Vec<Complex64>, Error> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&inline_or_file(s)?)
        .map_err(|e| Error::invalid(format!("expected a JSON list of [re,im] pairs: {e}")))?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

fn parse_lambda(s: &str) -> Result<CoefficientSet, Error> {
    CoefficientSet::new(parse_values(s)?)
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    parse_pair(s).map_err(|e| Error::invalid(format!("expected [re,im], got {s:?}: {e}")))
}

fn parse_zeta(s: &str) -> Result<Turns, Error> {
    if !s.trim_start().starts_with("turns:") {
        return Err(Error::invalid(format!("angles are written turns:<value>, got {s:?}")));
    }
    Turns::parse(s)
}

const DEFAULT_REGION: &str = "disk:0.95,0.1";

/// See the `--region` help for the grammar.
pub fn parse_region(s: Option<&str>, zeta: &Turns) -> Result<RegionSpec, Error> {
    let text = inline_or_file(s.unwrap_or(DEFAULT_REGION))?;
    let text = text.trim();
    if text.starts_with('{') {
        let r: RegionSpec = serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad region JSON: {e}")))?;
        return RegionSpec::new(r.pieces, r.accumulation_point);
    }
    let bad = || Error::invalid(format!("bad region {text:?}"));
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
    let mut pieces = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (kind, body) = part.split_once(':').ok_or_else(bad)?;
        let piece = match kind.trim() {
            "disk" => {
                let (c, r) = body.rsplit_once(',').ok_or_else(bad)?;
                let c = c.trim();
                let center = if c.starts_with('[') { parse_complex(c)? } else { zeta.unit() * num(c)? };
                Piece::Disk { center, radius: num(r)? }
            }
            "wedge" => {
                let v: Vec<f64> = body.split(',').map(num).collect::<Result<_, _>>()?;
                let [re_lo, re_hi, arg_center, half_angle] = v[..] else { return Err(bad()) };
                Piece::Wedge { re_lo, re_hi, arg_center, half_angle }
            }
            _ => return Err(bad()),
        };
        pieces.push(piece);
    }
    RegionSpec::new(pieces, *zeta)
}
