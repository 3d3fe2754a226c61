//! Greedy phase matching: approximate a target by a sum of distinct powers
//! `bⁿ` of a base point, matching the direction of the current residual at
//! every step and closing with one or two terms.

use num_complex::Complex64;

use crate::angle::Turns;
use crate::complex::{arg0, cpow};

/// Powers `bⁿ`, `n ∈ [lo, lo + len)`, of `b = ρ·e(x)` indexed by the
/// fractional angle `n·x mod 1`.
pub struct PowerTable {
    base: Complex64,
    lo: u64,
    sorted: Vec<(f64, u64)>,
    used: Vec<bool>,
}

impl PowerTable {
    pub fn new(angle: &Turns, modulus: f64, lo: u64, len: u64) -> Self {
        let mut sorted: Vec<(f64, u64)> = (lo..lo + len).map(|n| (angle.frac_of_multiple(n), n)).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let base = angle.unit() * modulus;
        PowerTable { base, lo, sorted, used: vec![false; len as usize] }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn value(&self, n: u64) -> Complex64 {
        cpow(self.base, n)
    }

    fn is_used(&self, n: u64) -> bool {
        self.used[(n - self.lo) as usize]
    }

    pub fn mark_used(&mut self, n: u64) {
        self.used[(n - self.lo) as usize] = true;
    }

    pub fn release(&mut self, n: u64) {
        self.used[(n - self.lo) as usize] = false;
    }

    /// Up to `k` unused exponents whose angle is closest to `target` (turns),
    /// in order of increasing circular distance.
    pub fn nearest_unused(&self, target: f64, k: usize) -> Vec<u64> {
        let len = self.sorted.len();
        let mut out = Vec::with_capacity(k);
        if len == 0 || k == 0 {
            return out;
        }
        let start = self.sorted.partition_point(|e| e.0 < target);
        // Directional distances: walking right measures (f − t) mod 1,
        // walking left measures (t − f) mod 1.
        let mut right = start % len;
        let mut left = (start + len - 1) % len;
        let dist_r = |i: usize| (self.sorted[i].0 - target).rem_euclid(1.0);
        let dist_l = |i: usize| (target - self.sorted[i].0).rem_euclid(1.0);
        for _ in 0..len {
            let take_right = dist_r(right) <= dist_l(left);
            let idx = if take_right { right } else { left };
            if take_right {
                right = (right + 1) % len;
            } else {
                left = (left + len - 1) % len;
            }
            let n = self.sorted[idx].1;
            if !self.is_used(n) && !out.contains(&n) {
                out.push(n);
                if out.len() == k {
                    break;
                }
            }
        }
        out
    }
}

/// Result of one greedy run; `exponents` is unsorted in the order chosen.
#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub exponents: Vec<u64>,
    pub error: f64,
    /// `|residual|` before each reduction step and after the last one.
    pub residuals: Vec<f64>,
    /// Chord `|u − r/|r||` between the chosen power and the residual direction.
    pub slacks: Vec<f64>,
}

fn turns_of(z: Complex64) -> f64 {
    arg0(z) / std::f64::consts::TAU
}

const CLOSURE_CANDIDATES: usize = 6;

/// Runs the greedy reduction while `|r| > 1`, then the best of the zero-,
/// one- and two-term closures. Used exponents stay marked in `table`.
pub fn greedy(table: &mut PowerTable, w: Complex64) -> GreedyOutcome {
    let mut r = w;
    let mut exponents = Vec::new();
    let mut residuals = vec![r.norm()];
    let mut slacks = Vec::new();
    while r.norm() > 1.0 {
        let Some(&n) = table.nearest_unused(turns_of(r), 1).first() else { break };
        let u = table.value(n);
        let next = r - u;
        if next.norm() >= r.norm() {
            break;
        }
        slacks.push((u / u.norm() - r / r.norm()).norm());
        table.mark_used(n);
        exponents.push(n);
        r = next;
        residuals.push(r.norm());
    }

    let mut best: (f64, Vec<u64>) = (r.norm(), Vec::new());
    for n in table.nearest_unused(turns_of(r), CLOSURE_CANDIDATES) {
        let e = (r - table.value(n)).norm();
        if e < best.0 {
            best = (e, vec![n]);
        }
    }
    if r.norm() > 0.0 {
        let half = (r.norm() / 2.0).min(1.0).acos() / std::f64::consts::TAU;
        let t = turns_of(r);
        let c1 = table.nearest_unused((t + half).rem_euclid(1.0), CLOSURE_CANDIDATES);
        let c2 = table.nearest_unused((t - half).rem_euclid(1.0), CLOSURE_CANDIDATES);
        for &n1 in &c1 {
            let r1 = r - table.value(n1);
            for &n2 in &c2 {
                if n1 == n2 {
                    continue;
                }
                let e = (r1 - table.value(n2)).norm();
                if e < best.0 {
                    best = (e, vec![n1, n2]);
                }
            }
        }
    }
    for &n in &best.1 {
        table.mark_used(n);
        exponents.push(n);
    }
    GreedyOutcome { exponents, error: best.0, residuals, slacks }
}

/// Integers `(a, b)` with `|x − a − b·c| < tol`, scanning `b = 0, ±1, ±2, …`
/// up to `|b| ≤ b_max`.
pub fn approximate_real(x: f64, c: f64, tol: f64, b_max: i64) -> Option<(i64, i64)> {
    let try_b = |b: i64| {
        let a = (x - b as f64 * c).round();
        ((x - a - b as f64 * c).abs() < tol).then_some((a as i64, b))
    };
    if let Some(p) = try_b(0) {
        return Some(p);
    }
    (1..=b_max).find_map(|b| try_b(b).or_else(|| try_b(-b)))
}
