//! Wedge regions on which `f` provably misses a half-plane when Λ is
//! degenerate, the sampled checks of those bounds, and the closed forms of
//! the odd-indicator series.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::Turns;
use crate::complex::{ONE, ZERO};
use crate::error::{Error, Result};
use crate::geometry::direction_arc;
use crate::region::{Piece, RegionSpec};
use crate::series::{tail_bound, SparseAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    AtMinusOne,
    AtPlusOne,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::AtMinusOne => -1.0,
            Side::AtPlusOne => 1.0,
        }
    }
}

/// `{−(k−1)/k < Re z < 0, |arg z − π| < α_k}` or its mirror image at +1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeRegion {
    pub k: u64,
    pub re_lo: f64,
    pub re_hi: f64,
    pub alpha_k: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub side: Side,
}

/// The numbers behind the wedge invariants for a given `(k, α, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeDiagnostic {
    /// `sup |z|` over the wedge, `((k−1)/k) / cos α`.
    pub r_hat: f64,
    /// `r̂^{2N} / (1 − r̂)`, bounding `|Σ_{n≥2N} zⁿ|`.
    pub tail: f64,
    pub closure_in_disk: bool,
    pub tail_ok: bool,
    /// `2Nα < arcsin(1/N)`.
    pub angle_ok: bool,
}

impl WedgeDiagnostic {
    pub fn consistent(&self) -> bool {
        self.closure_in_disk && self.tail_ok && self.angle_ok
    }
}

fn reach(k: u64) -> f64 {
    (k - 1) as f64 / k as f64
}

pub fn diagnose_wedge(k: u64, alpha: f64, n: u64) -> WedgeDiagnostic {
    let r_hat = reach(k) / alpha.cos();
    let closure_in_disk = alpha < PI / 2.0 && r_hat < 1.0;
    let tail = if closure_in_disk { r_hat.powf(2.0 * n as f64) / (1.0 - r_hat) } else { f64::INFINITY };
    WedgeDiagnostic {
        r_hat,
        tail,
        closure_in_disk,
        tail_ok: tail < 1.0,
        angle_ok: n >= 1 && 2.0 * n as f64 * alpha < (1.0 / n as f64).asin(),
    }
}

/// Smallest `N ≥ 1` with `r̂^{2N}/(1 − r̂) < 1`.
fn minimal_n(r_hat: f64) -> u64 {
    let mut n = ((-(1.0 - r_hat).ln()) / (2.0 * -r_hat.ln())).floor().max(1.0) as u64;
    while r_hat.powf(2.0 * n as f64) / (1.0 - r_hat) >= 1.0 {
        n += 1;
    }
    while n > 1 && r_hat.powf(2.0 * (n - 1) as f64) / (1.0 - r_hat) < 1.0 {
        n -= 1;
    }
    n
}

/// Starts at `α = π/64`, takes the minimal admissible `N`, and halves `α`
/// until `2Nα < arcsin(1/N)`.
pub fn build_wedge(k: u64, side: Side) -> Result<WedgeRegion> {
    if k < 2 {
        return Err(Error::invalid("wedge index k must be at least 2"));
    }
    let mut alpha = PI / 64.0;
    loop {
        let r_hat = reach(k) / alpha.cos();
        let n = minimal_n(r_hat);
        if diagnose_wedge(k, alpha, n).consistent() {
            let (re_lo, re_hi) = match side {
                Side::AtMinusOne => (-reach(k), 0.0),
                Side::AtPlusOne => (0.0, reach(k)),
            };
            return Ok(WedgeRegion { k, re_lo, re_hi, alpha_k: alpha, n, side });
        }
        alpha *= 0.5;
    }
}

impl WedgeRegion {
    pub fn diagnostic(&self) -> WedgeDiagnostic {
        diagnose_wedge(self.k, self.alpha_k, self.n)
    }

    fn arg_center(&self) -> f64 {
        match self.side {
            Side::AtMinusOne => PI,
            Side::AtPlusOne => 0.0,
        }
    }

    pub fn piece(&self) -> Piece {
        Piece::Wedge { re_lo: self.re_lo, re_hi: self.re_hi, arg_center: self.arg_center(), half_angle: self.alpha_k }
    }

    /// The wedge as a region spec pointing at ±1. A single wedge stops at
    /// `|Re z| = (k−1)/k`, so ζ is recorded without the accumulation check.
    pub fn region(&self) -> RegionSpec {
        let zeta = match self.side {
            Side::AtMinusOne => Turns::rational(1, 2),
            Side::AtPlusOne => Turns::rational(0, 1),
        }
        .expect("valid turns");
        RegionSpec::new_unchecked(vec![self.piece()], zeta).expect("wedge pieces are valid")
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.piece().contains(z)
    }

    /// `z = ±t(1 + i·tan θ)` with `t` uniform in the real range and `θ`
    /// uniform in `(−α, α)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        loop {
            let t = rng.random::<f64>() * reach(self.k);
            let theta = (2.0 * rng.random::<f64>() - 1.0) * self.alpha_k;
            let z = Complex64::new(1.0, theta.tan()) * (self.side.sign() * t);
            if self.contains(z) {
                return z;
            }
        }
    }
}

/// Outcome of a sampled evasion check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvasionReport {
    /// Largest `Im(prefix) + tail` (Theorem 2 side) or smallest
    /// `Re(prefix) − tail` (Theorem 3 side) over all samples.
    pub extreme: f64,
    pub bound: f64,
    pub trials: u64,
    pub z_samples: u64,
    pub seed: u64,
    pub pass: bool,
    /// Rotation applied to Λ before the check.
    #[serde(with = "crate::complex::pair")]
    pub rotation: Complex64,
    /// Per-trial extreme values.
    #[serde(skip)]
    pub trial_extrema: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvasionConfig {
    pub trials: u64,
    pub z_samples: u64,
    pub prefix_len: u64,
    pub seed: u64,
}

impl Default for EvasionConfig {
    fn default() -> Self {
        EvasionConfig { trials: 10_000, z_samples: 100, prefix_len: 512, seed: 0 }
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// One independent stream per trial, so results do not depend on threading.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` random coefficient sequences against `z_samples` wedge
/// points each and reduces `score(prefix value, tail)` with `pick`.
fn sampled_extreme(
    values: &[Complex64],
    wedge: &WedgeRegion,
    cfg: &EvasionConfig,
    score: impl Fn(Complex64, f64) -> f64 + Sync,
    pick: fn(f64, f64) -> f64,
    init: f64,
) -> Result<Vec<f64>> {
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if cfg.prefix_len < 2 * wedge.n {
        return Err(Error::invalid(format!("prefix length must be at least 2N = {}", 2 * wedge.n)));
    }
    let r_hat = wedge.diagnostic().r_hat;
    if sup > 0.0 && tail_bound(sup, r_hat, cfg.prefix_len)? >= 0.01 * sup {
        return Err(Error::invalid("prefix too short: tail bound at the wedge radius is not below 1% of sup|λ|"));
    }
    Ok((0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let coeffs: Vec<Complex64> =
                (0..cfg.prefix_len).map(|_| values[rng.random_range(0..values.len())]).collect();
            let mut best = init;
            for _ in 0..cfg.z_samples {
                let z = wedge.sample(&mut rng);
                let tail = tail_bound(sup, z.norm(), cfg.prefix_len).expect("inside the disk");
                best = pick(best, score(horner(&coeffs, z), tail));
            }
            best
        })
        .collect())
}

/// Theorem 2 side: for real Λ, `Im f ≤ 3·sup|λ|` on the wedge at −1.
pub fn imag_bound_check(values: &[Complex64], wedge: &WedgeRegion, cfg: &EvasionConfig) -> Result<EvasionReport> {
    if values.is_empty() || values.iter().any(|v| v.im != 0.0) {
        return Err(Error::invalid("the imaginary-part check needs a nonempty real coefficient set"));
    }
    if wedge.side != Side::AtMinusOne {
        return Err(Error::invalid("the imaginary-part check uses a wedge at -1"));
    }
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let per_trial = sampled_extreme(values, wedge, cfg, |f, tail| f.im + tail, f64::max, f64::NEG_INFINITY)?;
    let extreme = per_trial.iter().copied().fold(if cfg.trials == 0 { 0.0 } else { f64::NEG_INFINITY }, f64::max);
    let bound = 3.0 * sup;
    Ok(EvasionReport {
        extreme,
        bound,
        trials: cfg.trials,
        z_samples: cfg.z_samples,
        seed: cfg.seed,
        pass: extreme <= bound + 1e-9,
        rotation: ONE,
        trial_extrema: per_trial,
    })
}

/// Rotation taking the directions of Λ into `[−π/2, π/2]`, centred on the
/// real axis.
pub fn half_plane_rotation(values: &[Complex64]) -> Result<Complex64> {
    let (start, len) = direction_arc(values).ok_or(Error::NotApplicable { reason: "spanning".into() })?;
    Ok(Complex64::from_polar(1.0, -(start + len / 2.0)))
}

/// Theorem 3 side: for Λ in a closed half-plane through 0, rotated onto
/// `{Re ≥ 0}`, `Re f ≥ −3·sup|λ|` on the wedge at +1.
pub fn real_bound_check(values: &[Complex64], wedge: &WedgeRegion, cfg: &EvasionConfig) -> Result<EvasionReport> {
    if values.is_empty() {
        return Err(Error::invalid("the real-part check needs a nonempty coefficient set"));
    }
    if wedge.side != Side::AtPlusOne {
        return Err(Error::invalid("the real-part check uses a wedge at +1"));
    }
    let rotation = half_plane_rotation(values)?;
    let rotated: Vec<Complex64> = values.iter().map(|&v| v * rotation).collect();
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let per_trial = sampled_extreme(&rotated, wedge, cfg, |f, tail| f.re - tail, f64::min, f64::INFINITY)?;
    let extreme = per_trial.iter().copied().fold(if cfg.trials == 0 { 0.0 } else { f64::INFINITY }, f64::min);
    let bound = -3.0 * sup;
    Ok(EvasionReport {
        extreme,
        bound,
        trials: cfg.trials,
        z_samples: cfg.z_samples,
        seed: cfg.seed,
        pass: extreme >= bound - 1e-9,
        rotation,
        trial_extrema: per_trial,
    })
}

/// `(z/(1 − z²), −1/(2(1 + z)))`: the sums of `Σ z^{2k+1}` and of the same
/// series with every coefficient shifted by −1/2.
pub fn remark_closed_forms(z: Complex64) -> Result<(Complex64, Complex64)> {
    if !(z.norm() < 1.0) {
        return Err(Error::invalid("closed forms need |z| < 1"));
    }
    Ok((z / (ONE - z * z), -ONE / (2.0 * (ONE + z))))
}

/// Coefficient 1 at odd indices below `len`, 0 elsewhere (zeros omitted).
pub fn odd_indicator(len: u64) -> SparseAssignment {
    SparseAssignment::new((0..len).filter(|n| n % 2 == 1).map(|n| (n, ONE)).collect()).expect("increasing")
}

/// The odd indicator minus 1/2, listed at every index below `len`.
pub fn shifted_odd_indicator(len: u64) -> SparseAssignment {
    let half = Complex64::new(0.5, 0.0);
    SparseAssignment::new((0..len).map(|n| (n, if n % 2 == 1 { half } else { -half })).collect()).expect("increasing")
}
