//! Exact arithmetic in `ℤ[ζ]` for the six roots `±i, ±ω, ±ω²`, nearest-point
//! rounding in the Gaussian and Eisenstein lattices, and the rewriting of an
//! integer combination `a + bζ` as a sum of distinct nonnegative powers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::ExcludedRoot;
use crate::nets::ExponentSum;

/// `a + bζ` in `ℤ[ζ]`, where ζ satisfies `ζ² = tζ − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
    pub zeta: ExcludedRoot,
}

impl LatticePoint {
    pub fn new(a: i64, b: i64, zeta: ExcludedRoot) -> Self {
        LatticePoint { a, b, zeta }
    }

    pub fn value(&self) -> Complex64 {
        self.a as f64 + self.zeta.value() * self.b as f64
    }

    /// Multiplication by ζ: `(a + bζ)ζ = −b + (a + bt)ζ`.
    pub fn times_zeta(self) -> Self {
        let t = self.zeta.trace();
        LatticePoint { a: -self.b, b: self.a + self.b * t, zeta: self.zeta }
    }

    /// `ζⁿ` as an exact lattice point.
    pub fn power(zeta: ExcludedRoot, n: u64) -> Self {
        let mut p = LatticePoint::new(1, 0, zeta);
        for _ in 0..(n % zeta.order()) {
            p = p.times_zeta();
        }
        p
    }

    pub fn plus(self, other: Self) -> Self {
        debug_assert_eq!(self.zeta, other.zeta);
        LatticePoint { a: self.a + other.a, b: self.b + other.b, zeta: self.zeta }
    }
}

/// Exact value of `Σ ζ^{n_j}` in `ℤ[ζ]`.
pub fn exact_sum(zeta: ExcludedRoot, exponents: &[u64]) -> LatticePoint {
    let order = zeta.order();
    let powers: Vec<LatticePoint> = (0..order).map(|k| LatticePoint::power(zeta, k)).collect();
    exponents
        .iter()
        .fold(LatticePoint::new(0, 0, zeta), |acc, &n| acc.plus(powers[(n % order) as usize]))
}

const TIE_TOL: f64 = 1e-12;

/// Nearest point `a + bζ` to `w`, ties broken toward smaller `|a| + |b|`,
/// then smaller `a`, then smaller `b`.
pub fn lattice_round(w: Complex64, zeta: ExcludedRoot) -> LatticePoint {
    let z = zeta.value();
    // w = x + yζ with real x, y.
    let y = w.im / z.im;
    let x = w.re - y * z.re;
    let (x0, y0) = (x.round() as i64, y.round() as i64);
    let mut best: Option<(f64, LatticePoint)> = None;
    for a in x0 - 1..=x0 + 1 {
        for b in y0 - 1..=y0 + 1 {
            let p = LatticePoint::new(a, b, zeta);
            let d = (w - p.value()).norm();
            let better = match best {
                None => true,
                Some((bd, bp)) => {
                    if (d - bd).abs() > TIE_TOL {
                        d < bd
                    } else {
                        (a.abs() + b.abs(), a, b) < (bp.a.abs() + bp.b.abs(), bp.a, bp.b)
                    }
                }
            };
            if better {
                best = Some((d, p));
            }
        }
    }
    best.expect("nine candidates").1
}

/// Covering radius of the lattice `ℤ[ζ]`: `√2/2` for `ℤ[i]`, `1/√3` for `ℤ[ω]`.
pub fn covering_radius(zeta: ExcludedRoot) -> f64 {
    match zeta.order() {
        4 => std::f64::consts::FRAC_1_SQRT_2,
        _ => 1.0 / 3f64.sqrt(),
    }
}

/// Multiplicities per residue mod 12 realizing `a + bζ` with nonnegative
/// coefficients, via `−1 = Σ_{j=1}^{11} ζ^j` and `−ζ = Σ_{j=2}^{12} ζ^j`.
fn residue_counts(p: LatticePoint) -> [u64; 12] {
    let mut counts = [0u64; 12];
    if p.a >= 0 {
        counts[0] += p.a as u64;
    } else {
        for c in counts.iter_mut().skip(1) {
            *c += p.a.unsigned_abs();
        }
    }
    if p.b >= 0 {
        counts[1] += p.b as u64;
    } else {
        for j in 2..=12 {
            counts[j % 12] += p.b.unsigned_abs();
        }
    }
    counts
}

/// The `count` smallest exponents `≥ min_index` congruent to `residue` mod `modulus`.
pub(crate) fn exponents_in_class(residue: u64, modulus: u64, min_index: u64, count: u64) -> impl Iterator<Item = u64> {
    let first = min_index + (residue + modulus - min_index % modulus) % modulus;
    (0..count).map(move |j| first + j * modulus)
}

fn exponents_from_counts(counts: &[u64], min_index: u64) -> Vec<u64> {
    let modulus = counts.len() as u64;
    let mut out: Vec<u64> = counts
        .iter()
        .enumerate()
        .flat_map(|(k, &c)| exponents_in_class(k as u64, modulus, min_index, c))
        .collect();
    out.sort_unstable();
    out
}

/// Distinct exponents `≥ min_index` whose power sum equals `a + bζ` exactly.
///
/// Negative coefficients use the eleven-term identities; repeated residues
/// are spread over `k, k + 12, k + 24, …`.
pub fn expand_nonneg(p: LatticePoint, min_index: u64) -> ExponentSum {
    let counts = residue_counts(p);
    ExponentSum::from_sorted(p.zeta.turns(), min_index, exponents_from_counts(&counts, min_index))
}

/// Drops complete cycles `Σ_{k<ord} ζ^k = 0` and repacks the remaining
/// multiplicities onto the smallest admissible exponents. The exact value is
/// unchanged.
pub fn reduce_full_cycles(sum: &ExponentSum, zeta: ExcludedRoot) -> ExponentSum {
    let order = zeta.order();
    let mut counts = vec![0u64; order as usize];
    for &n in sum.exponents() {
        counts[(n % order) as usize] += 1;
    }
    let m = *counts.iter().min().unwrap_or(&0);
    for c in counts.iter_mut() {
        *c -= m;
    }
    ExponentSum::from_sorted(sum.zeta(), sum.min_index(), exponents_from_counts(&counts, sum.min_index()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_examples() {
        let p = lattice_round(Complex64::new(2.3, 0.4), ExcludedRoot::I);
        assert_eq!((p.a, p.b), (2, 0));
        assert!((p.value() - Complex64::new(2.3, 0.4)).norm() - 0.5 < 1e-12);
        for z in ExcludedRoot::ALL {
            let p = lattice_round(Complex64::new(0.0, 0.0), z);
            assert_eq!((p.a, p.b), (0, 0));
        }
    }

    #[test]
    fn rounding_matches_grid_oracle() {
        // Exhaustive search over a,b ∈ [−16, 16].
        let w = Complex64::new(5.1, -2.2);
        let z = ExcludedRoot::Omega;
        let mut best = f64::INFINITY;
        for a in -16..=16 {
            for b in -16..=16 {
                best = best.min((w - LatticePoint::new(a, b, z).value()).norm());
            }
        }
        let p = lattice_round(w, z);
        let d = (w - p.value()).norm();
        assert!((d - best).abs() < 1e-12);
        assert!(d < 1.0 / 3f64.sqrt() + 1e-12);
    }

    #[test]
    fn expansion_examples() {
        let one = expand_nonneg(LatticePoint::new(1, 0, ExcludedRoot::I), 0);
        assert_eq!(one.exponents(), &[0]);

        let minus_one = expand_nonneg(LatticePoint::new(-1, 0, ExcludedRoot::I), 1);
        assert_eq!(minus_one.exponents(), &(1..=11).collect::<Vec<_>>()[..]);
        assert_eq!(exact_sum(ExcludedRoot::I, minus_one.exponents()), LatticePoint::new(-1, 0, ExcludedRoot::I));

        let p = LatticePoint::new(2, -1, ExcludedRoot::Omega);
        let s = expand_nonneg(p, 5);
        assert!(s.exponents().iter().all(|&n| n >= 5));
        assert_eq!(exact_sum(ExcludedRoot::Omega, s.exponents()), p);
    }

    #[test]
    fn eleven_term_identities_hold_exactly() {
        for z in ExcludedRoot::ALL {
            let ones: Vec<u64> = (1..=11).collect();
            assert_eq!(exact_sum(z, &ones), LatticePoint::new(-1, 0, z));
            let zetas: Vec<u64> = (2..=12).collect();
            assert_eq!(exact_sum(z, &zetas), LatticePoint::new(0, -1, z));
        }
    }

    #[test]
    fn cycle_reduction_keeps_value() {
        let p = LatticePoint::new(7, -3, ExcludedRoot::I);
        let s = expand_nonneg(p, 0);
        let r = reduce_full_cycles(&s, ExcludedRoot::I);
        assert!(r.exponents().len() < s.exponents().len());
        assert_eq!(exact_sum(ExcludedRoot::I, r.exponents()), p);
    }

    #[test]
    fn class_exponents() {
        let v: Vec<u64> = exponents_in_class(0, 12, 1, 2).collect();
        assert_eq!(v, vec![12, 24]);
        let v: Vec<u64> = exponents_in_class(5, 12, 5, 2).collect();
        assert_eq!(v, vec![5, 17]);
    }
}
