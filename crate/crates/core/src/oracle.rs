//! Exhaustive ground truth at small scale.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSet;
use crate::complex::{cpow, ZERO};
use crate::error::{Error, Result};
use crate::series::SparseAssignment;

pub const DIRECT_BUDGET: u64 = 1 << 26;
pub const HALF_BUDGET: u64 = 1 << 24;
const COVERAGE_RESOLUTION: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_error: f64,
    /// Dense assignment on `0..L`.
    pub best_assignment: SparseAssignment,
    pub evaluated_count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Direct,
    MeetInMiddle,
    /// Direct when `|Λ|^L ≤ 2^20`, meet-in-the-middle otherwise.
    Auto,
}

fn count(base: usize, len: usize) -> Option<u64> {
    (base as u64).checked_pow(len as u32)
}

/// Digits (element indices) of `code` in base `b`, most significant first.
fn digits(mut code: u64, base: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for slot in d.iter_mut().rev() {
        *slot = (code % base as u64) as usize;
        code /= base as u64;
    }
    d
}

/// `(error, code)` ordered by error, then lexicographically.
fn better(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    if a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1) {
        a
    } else {
        b
    }
}

/// All `|Λ|^len` sums `Σ λ_{d_n} τ^{offset+n}` in lexicographic order of the digits.
fn all_sums(lambda: &CoefficientSet, tau: Complex64, offset: usize, len: usize) -> Vec<Complex64> {
    let els = lambda.elements();
    let mut sums = vec![ZERO];
    for n in 0..len {
        let p = cpow(tau, (offset + n) as u64);
        sums = sums.iter().flat_map(|&s| els.iter().map(move |&e| s + e * p)).collect();
    }
    sums
}

/// Exact minimum of `|Σ_{n<L} λ_n τⁿ − w|` over all assignments.
pub fn best_prefix_error(
    lambda: &CoefficientSet,
    tau: Complex64,
    w: Complex64,
    len: usize,
    strategy: Strategy,
) -> Result<OracleResult> {
    if !(tau.norm() < 1.0) {
        return Err(Error::invalid("oracle needs |tau| < 1"));
    }
    let total = count(lambda.len(), len);
    let strategy = match strategy {
        Strategy::Auto if total.is_some_and(|t| t <= 1 << 20) => Strategy::Direct,
        Strategy::Auto => Strategy::MeetInMiddle,
        s => s,
    };
    match strategy {
        Strategy::Direct => direct(lambda, tau, w, len, total),
        _ => meet_in_middle(lambda, tau, w, len),
    }
}

fn direct(lambda: &CoefficientSet, tau: Complex64, w: Complex64, len: usize, total: Option<u64>) -> Result<OracleResult> {
    let total = total.filter(|&t| t <= DIRECT_BUDGET).ok_or_else(|| {
        Error::BudgetExceeded(format!("|Λ|^L exceeds the direct budget of {DIRECT_BUDGET}"))
    })?;
    let base = lambda.len();
    // split on the leading digits, enumerate the rest sequentially
    let head = len.min(((total as f64).log(base as f64) / 2.0).floor() as usize).min(len);
    let heads = all_sums(lambda, tau, 0, head);
    let tails = all_sums(lambda, tau, head, len - head);
    let per_head = tails.len() as u64;
    let (err, code) = heads
        .par_iter()
        .enumerate()
        .map(|(i, &h)| {
            let mut best = (f64::INFINITY, u64::MAX);
            for (j, &t) in tails.iter().enumerate() {
                best = better(best, ((h + t - w).norm(), i as u64 * per_head + j as u64));
            }
            best
        })
        .reduce(|| (f64::INFINITY, u64::MAX), better);
    Ok(finish(lambda, err, code, len, total))
}

fn finish(lambda: &CoefficientSet, err: f64, code: u64, len: usize, evaluated: u64) -> OracleResult {
    let values: Vec<Complex64> = digits(code, lambda.len(), len).into_iter().map(|d| lambda.elements()[d]).collect();
    OracleResult { best_error: err, best_assignment: SparseAssignment::dense(&values), evaluated_count: evaluated }
}

fn meet_in_middle(lambda: &CoefficientSet, tau: Complex64, w: Complex64, len: usize) -> Result<OracleResult> {
    let lo_len = len / 2;
    let hi_len = len - lo_len;
    let base = lambda.len();
    for l in [lo_len, hi_len] {
        if count(base, l).is_none_or(|c| c > HALF_BUDGET) {
            return Err(Error::BudgetExceeded(format!("half enumeration exceeds {HALF_BUDGET}")));
        }
    }
    let lo = all_sums(lambda, tau, 0, lo_len);
    let hi = all_sums(lambda, tau, lo_len, hi_len);
    let mut sorted: Vec<(Complex64, u64)> = hi.iter().enumerate().map(|(j, &s)| (s, j as u64)).collect();
    sorted.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.1.cmp(&b.1)));
    let per_lo = hi.len() as u64;

    let (err, code) = lo
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            let t = w - a;
            let start = sorted.partition_point(|p| p.0.re < t.re);
            let mut best = (f64::INFINITY, u64::MAX);
            let mut visit = |k: usize| -> bool {
                let (b, j) = sorted[k];
                if (b.re - t.re).abs() > best.0 {
                    return false;
                }
                best = better(best, ((a + b - w).norm(), i as u64 * per_lo + j));
                true
            };
            for k in start..sorted.len() {
                if !visit(k) {
                    break;
                }
            }
            for k in (0..start).rev() {
                if !visit(k) {
                    break;
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, u64::MAX), better);
    Ok(finish(lambda, err, code, len, (lo.len() + hi.len()) as u64))
}

/// Centers of the `100 × 100` grid over the disk's bounding box that lie in the disk.
pub fn coverage_grid(center: Complex64, radius: f64) -> Vec<Complex64> {
    let step = 2.0 * radius / COVERAGE_RESOLUTION as f64;
    let mut g = Vec::new();
    for i in 0..COVERAGE_RESOLUTION {
        for j in 0..COVERAGE_RESOLUTION {
            let z = center + Complex64::new(-radius + (i as f64 + 0.5) * step, -radius + (j as f64 + 0.5) * step);
            if (z - center).norm() <= radius {
                g.push(z);
            }
        }
    }
    g
}

/// Fraction of [`coverage_grid`] points within `eps` of some point.
pub fn net_coverage(points: &[Complex64], eps: f64, center: Complex64, radius: f64) -> Result<f64> {
    if !(eps > 0.0) || !(radius > 0.0) {
        return Err(Error::invalid("coverage needs positive eps and radius"));
    }
    let grid = coverage_grid(center, radius);
    if grid.is_empty() {
        return Ok(0.0);
    }
    let cell = |z: Complex64| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    for &p in points {
        buckets.entry(cell(p)).or_default().push(p);
    }
    let hit = grid
        .iter()
        .filter(|&&g| {
            let (ci, cj) = cell(g);
            (-1..=1).any(|di| {
                (-1..=1).any(|dj| {
                    buckets.get(&(ci + di, cj + dj)).is_some_and(|v| v.iter().any(|&p| (p - g).norm() < eps))
                })
            })
        })
        .count();
    Ok(hit as f64 / grid.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::e_turns;

    fn zero_one() -> CoefficientSet {
        CoefficientSet::from_reals(&[0.0, 1.0]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_representation() {
        let r = best_prefix_error(&zero_one(), c(0.5, 0.0), c(1.875, 0.0), 4, Strategy::Direct).unwrap();
        assert_eq!(r.best_error, 0.0);
        assert_eq!(r.best_assignment, SparseAssignment::dense(&[c(1.0, 0.0); 4]));
        assert_eq!(r.evaluated_count, 16);
    }

    #[test]
    fn two_cases() {
        let r = best_prefix_error(&zero_one(), c(0.5, 0.0), c(0.3, 0.0), 1, Strategy::Direct).unwrap();
        assert!((r.best_error - 0.3).abs() < 1e-15);
        assert_eq!(r.best_assignment, SparseAssignment::dense(&[c(0.0, 0.0)]));
        let r = best_prefix_error(&zero_one(), c(0.5, 0.0), c(0.8, 0.0), 1, Strategy::Direct).unwrap();
        assert!((r.best_error - 0.2).abs() < 1e-15);
    }

    #[test]
    fn strategies_agree() {
        let tau = 0.6 * e_turns(0.2);
        let w = c(1.0, 0.5);
        let d = best_prefix_error(&zero_one(), tau, w, 16, Strategy::Direct).unwrap();
        let m = best_prefix_error(&zero_one(), tau, w, 16, Strategy::MeetInMiddle).unwrap();
        assert!((d.best_error - m.best_error).abs() <= 1e-12);
        assert_eq!(m.evaluated_count, 512);
    }

    #[test]
    fn budget() {
        let r = best_prefix_error(&zero_one(), c(0.5, 0.0), c(0.0, 0.0), 30, Strategy::Direct);
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
        let r = best_prefix_error(&zero_one(), c(0.5, 0.0), c(0.0, 0.0), 60, Strategy::MeetInMiddle);
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn coverage_examples() {
        let g = coverage_grid(c(0.0, 0.0), 3.0);
        assert_eq!(net_coverage(&g, 0.01, c(0.0, 0.0), 3.0).unwrap(), 1.0);
        assert_eq!(net_coverage(&[], 1.0, c(0.0, 0.0), 3.0).unwrap(), 0.0);
        let lattice: Vec<Complex64> = (-5..=5)
            .flat_map(|a| (-5..=5).map(move |b| c(a as f64, b as f64)))
            .filter(|z| z.norm() < 5.0)
            .collect();
        assert_eq!(net_coverage(&lattice, 0.75, c(0.0, 0.0), 3.0).unwrap(), 1.0);
    }
}
