//! Geometry of the coefficient set: line / half-plane / spanning
//! classification, the Δ-quadruple, the descent radius and the
//! bounded-partial-sum scheduler.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSet;
use crate::complex::{arg0, cpow, pair, pair_vec, ZERO};
use crate::error::{Error, Result};
use crate::series::SparseAssignment;

const ANGLE_TOL: f64 = 1e-12;
const DESCENT_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaKind {
    /// All elements on `{offset + t·direction}`; `offset` is the point of the
    /// line nearest the origin and `arg direction ∈ [0, π)`.
    ContainedInLine {
        #[serde(with = "pair")]
        direction: Complex64,
        #[serde(with = "pair")]
        offset: Complex64,
    },
    /// Every nonzero element has `arg ∈ [alpha, alpha + π]`.
    ContainedInHalfPlane { alpha: f64 },
    Spanning,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaClass {
    #[serde(flatten)]
    pub kind: LambdaKind,
    /// Supporting angle of a closed half-plane through 0 containing Λ, when
    /// one exists (also reported for the line case).
    pub half_plane_alpha: Option<f64>,
    /// Line: two elements spanning it. Half-plane: the unit normal pointing
    /// into the half-plane. Spanning: the elements bounding the widest gap
    /// between directions.
    #[serde(with = "pair_vec")]
    pub witness: Vec<Complex64>,
}

impl LambdaClass {
    pub fn is_line(&self) -> bool {
        matches!(self.kind, LambdaKind::ContainedInLine { .. })
    }

    pub fn is_spanning(&self) -> bool {
        self.kind == LambdaKind::Spanning
    }
}

/// `arg(b / a)` in `[0, 2π)`, with values within rounding of `2π` snapped to 0.
fn ratio_arg(a: Complex64, b: Complex64) -> f64 {
    let t = arg0(b * a.conj());
    if t > TAU - ANGLE_TOL {
        0.0
    } else {
        t
    }
}

/// Argument in `[0, 2π)` with near-real values snapped onto the axis.
fn snapped_arg(z: Complex64) -> f64 {
    if z.im.abs() <= ANGLE_TOL * z.norm() {
        if z.re > 0.0 {
            0.0
        } else {
            PI
        }
    } else {
        arg0(z)
    }
}

/// Sign of the imaginary part, with near-real values counted as real.
fn im_sign(z: Complex64) -> i8 {
    if z.im.abs() <= ANGLE_TOL * z.norm() {
        0
    } else if z.im > 0.0 {
        1
    } else {
        -1
    }
}

/// Sorted arguments of the nonzero elements.
fn nonzero_args(values: &[Complex64]) -> Vec<(f64, Complex64)> {
    let mut v: Vec<(f64, Complex64)> =
        values.iter().filter(|e| e.norm() > 0.0).map(|&e| (snapped_arg(e), e)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// Widest circular gap between consecutive directions: `(gap, before, after)`.
fn widest_gap(args: &[(f64, Complex64)]) -> (f64, Complex64, Complex64) {
    let n = args.len();
    let mut best = (TAU, args[0].1, args[0].1);
    if n == 1 {
        return best;
    }
    best.0 = -1.0;
    for i in 0..n {
        let (a, ea) = args[i];
        let (b, eb) = args[(i + 1) % n];
        let gap = if i + 1 == n { b + TAU - a } else { b - a };
        if gap > best.0 + ANGLE_TOL {
            best = (gap, ea, eb);
        }
    }
    best
}

/// Shortest closed arc `(start, length)` of directions containing every
/// nonzero value, when one of length at most π exists. All-zero input gives
/// `(0, 0)`.
pub fn direction_arc(values: &[Complex64]) -> Option<(f64, f64)> {
    let args = nonzero_args(values);
    if args.is_empty() {
        return Some((0.0, 0.0));
    }
    let (gap, _, after) = widest_gap(&args);
    (gap >= PI - ANGLE_TOL).then(|| (snapped_arg(after), (TAU - gap).max(0.0)))
}

pub fn classify_lambda(lambda: &CoefficientSet) -> LambdaClass {
    let args = nonzero_args(lambda.elements());
    let (gap, before, after) = widest_gap(&args);
    let half_plane_alpha = (gap >= PI - ANGLE_TOL).then(|| snapped_arg(after));

    let els = lambda.elements();
    let p0 = els[0];
    let p1 = els.iter().copied().max_by(|a, b| (a - p0).norm().total_cmp(&(b - p0).norm())).unwrap();
    let mut d = (p1 - p0) / (p1 - p0).norm();
    let scale = els.iter().map(|e| e.norm()).fold(1.0, f64::max);
    let collinear = els.iter().all(|&p| ((p - p0) * d.conj()).im.abs() <= ANGLE_TOL * scale);
    if collinear {
        if d.im < 0.0 || (d.im == 0.0 && d.re < 0.0) {
            d = -d;
        }
        let offset = p0 - d * (p0 * d.conj()).re;
        return LambdaClass {
            kind: LambdaKind::ContainedInLine { direction: d, offset },
            half_plane_alpha,
            witness: vec![p0, p1],
        };
    }
    match half_plane_alpha {
        Some(alpha) => LambdaClass {
            kind: LambdaKind::ContainedInHalfPlane { alpha },
            half_plane_alpha,
            witness: vec![Complex64::from_polar(1.0, alpha + PI / 2.0)],
        },
        None => LambdaClass { kind: LambdaKind::Spanning, half_plane_alpha: None, witness: vec![before, after] },
    }
}

/// Four elements of Λ whose consecutive directions turn by less than π.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaQuadruple {
    #[serde(with = "pair_vec")]
    pub deltas: Vec<Complex64>,
    pub alpha0: f64,
}

impl DeltaQuadruple {
    pub fn ratio_args(&self) -> [f64; 4] {
        std::array::from_fn(|j| ratio_arg(self.deltas[j], self.deltas[(j + 1) % 4]))
    }

    pub fn check(&self) -> bool {
        let r = self.ratio_args();
        r.iter().all(|&t| (0.0..PI).contains(&t)) && (self.alpha0 - r.iter().copied().fold(0.0, f64::max)).abs() < 1e-15
    }
}

fn quadruple(deltas: [Complex64; 4]) -> Option<DeltaQuadruple> {
    let q = DeltaQuadruple { deltas: deltas.to_vec(), alpha0: 0.0 };
    let r = q.ratio_args();
    let alpha0 = r.iter().copied().fold(0.0, f64::max);
    (alpha0 < PI - ANGLE_TOL).then_some(DeltaQuadruple { alpha0, ..q })
}

pub fn find_delta_quadruple(lambda: &CoefficientSet) -> Result<DeltaQuadruple> {
    if !classify_lambda(lambda).is_spanning() {
        return Err(Error::NotSpanning);
    }
    // Divide by the element of largest modulus so that it becomes 1.
    let s = lambda
        .elements()
        .iter()
        .copied()
        .reduce(|a, b| if b.norm() > a.norm() { b } else { a })
        .unwrap();
    let scaled: Vec<(Complex64, Complex64)> = lambda.elements().iter().map(|&e| (e / s, e)).collect();
    let arg_of = snapped_arg;

    let upper = scaled.iter().filter(|(z, _)| im_sign(*z) > 0);
    let beta = upper.clone().map(|(z, _)| arg_of(*z)).fold(f64::NEG_INFINITY, f64::max);
    let d1s: Vec<Complex64> = upper.filter(|(z, _)| arg_of(*z) >= beta - ANGLE_TOL).map(|p| p.1).collect();
    let d2s: Vec<Complex64> = scaled
        .iter()
        .filter(|(z, _)| {
            let a = arg_of(*z);
            z.norm() > 0.0 && a >= PI - ANGLE_TOL && a < beta + PI
        })
        .map(|p| p.1)
        .collect();
    let lower: Vec<Complex64> = scaled.iter().filter(|(z, _)| im_sign(*z) < 0).map(|p| p.1).collect();

    let mut best: Option<DeltaQuadruple> = None;
    for &d1 in &d1s {
        for &d2 in &d2s {
            let mut d3s = vec![d2];
            if arg_of(d2 / s) <= PI + ANGLE_TOL {
                d3s.extend(lower.iter().copied());
            }
            for &d3 in &d3s {
                if let Some(q) = quadruple([s, d1, d2, d3]) {
                    if best.as_ref().is_none_or(|b| q.alpha0 < b.alpha0 - ANGLE_TOL) {
                        best = Some(q);
                    }
                }
            }
        }
    }
    best.ok_or_else(|| Error::VerificationFailed("no admissible quadruple for a spanning set".into()))
}

/// `min_λ |z + λ|` over the nonzero elements.
fn best_step(lambda: &CoefficientSet, z: Complex64) -> f64 {
    lambda.elements().iter().map(|&l| (z + l).norm()).fold(f64::INFINITY, f64::min)
}

/// Radius `R` beyond which some `λ ∈ Λ` strictly decreases `|z + λ|`.
///
/// Every direction lies within half the widest angular gap `γ` of some
/// element direction, so `R = 1.01 · sup|λ| / (2 cos(γ/2))` suffices. The gaps
/// of the Δ-quadruple are unions of element gaps, hence `γ ≤ α₀` and this
/// never exceeds the quadruple bound `1.01 · max|Δ_j| / (2 cos(α₀/2))`.
pub fn descent_radius(lambda: &CoefficientSet) -> Result<f64> {
    let quad = find_delta_quadruple(lambda)?;
    let args = nonzero_args(lambda.elements());
    let gamma = widest_gap(&args).0.min(quad.alpha0);
    let sup = lambda.sup_modulus();
    let r = 1.01 * sup / (2.0 * (gamma / 2.0).cos());
    verify_descent(lambda, r)?;
    Ok(r)
}

/// Samples equally spaced directions on `|z| = radius` (with a seeded random
/// phase) and checks that each admits a strictly decreasing step.
pub fn verify_descent(lambda: &CoefficientSet, radius: f64) -> Result<()> {
    let phase: f64 = ChaCha8Rng::seed_from_u64(0x5eed).random::<f64>() * TAU;
    for k in 0..DESCENT_SAMPLES {
        let z = Complex64::from_polar(radius, phase + TAU * k as f64 / DESCENT_SAMPLES as f64);
        if best_step(lambda, z) >= radius {
            return Err(Error::VerificationFailed(format!("no descent step at z = {z}")));
        }
    }
    Ok(())
}

/// Result of [`bounded_tail_schedule`].
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub assignment: SparseAssignment,
    /// `R + sup|λ|`.
    pub r_star: f64,
    /// Largest modulus among the partial sums.
    pub max_partial: f64,
    /// Final sum `Σ λ_n zⁿ` over the scheduled indices.
    pub sum: Complex64,
}

/// Assigns a Λ-value to each index so that every partial sum stays within
/// `R* = R + sup|λ|`.
pub fn bounded_tail_schedule(lambda: &CoefficientSet, z: Complex64, indices: &[u64]) -> Result<Schedule> {
    let r = descent_radius(lambda)?;
    schedule_with_radius(lambda, z, indices, r)
}

pub(crate) fn schedule_with_radius(lambda: &CoefficientSet, z: Complex64, indices: &[u64], r: f64) -> Result<Schedule> {
    if !(z.norm() < 1.0) {
        return Err(Error::invalid("schedule point must lie in the unit disk"));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("indices must be strictly increasing"));
    }
    let quiet = lambda.min_modulus_element();
    let mut terms = Vec::with_capacity(indices.len());
    let mut s = ZERO;
    let mut max_partial: f64 = 0.0;
    let mut pw = ZERO;
    let mut last: Option<u64> = None;
    for &n in indices {
        pw = match last {
            Some(m) => pw * cpow(z, n - m),
            None => cpow(z, n),
        };
        last = Some(n);
        let v = if s.norm() <= r {
            quiet
        } else {
            lambda
                .elements()
                .iter()
                .copied()
                .reduce(|a, b| if (s + b * pw).norm() < (s + a * pw).norm() { b } else { a })
                .unwrap()
        };
        s += v * pw;
        max_partial = max_partial.max(s.norm());
        terms.push((n, v));
    }
    Ok(Schedule {
        assignment: SparseAssignment::new(terms)?,
        r_star: r + lambda.sup_modulus(),
        max_partial,
        sum: s,
    })
}

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

/// Radius of the largest disk about 0 inside the hull; 0 if 0 is not interior.
pub fn inradius_at_origin(points: &[Complex64]) -> f64 {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return 0.0;
    }
    let mut r = f64::INFINITY;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let e = b - a;
        // signed distance of 0 to the edge line, positive on the inner side
        let d = ((ZERO - a).im * e.re - (ZERO - a).re * e.im) / e.norm();
        r = r.min(d);
    }
    r.max(0.0)
}

pub fn diameter(points: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}
