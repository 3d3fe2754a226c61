//! ε-nets of ℂ made of finite sums of distinct powers `ζ^{n}`, `n ≥ N`, of a
//! unimodular ζ.

pub mod greedy;
pub mod lattice;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{Turns, ZetaKind};
use crate::complex::{cpow, ZERO};
use crate::error::{Error, Result};

pub use greedy::{greedy, GreedyOutcome, PowerTable};
pub use lattice::{expand_nonneg, lattice_round, reduce_full_cycles, LatticePoint};

/// Horizon cap used by [`one_net_sum`].
pub const DEFAULT_HORIZON_CAP: u64 = 1 << 20;

const INITIAL_HORIZON: u64 = 64;

/// `Σ_j ζ^{n_j}` over strictly increasing exponents `n_j ≥ min_index`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentSum {
    pub zeta: Turns,
    pub min_index: u64,
    exponents: Vec<u64>,
}

impl ExponentSum {
    pub fn new(zeta: Turns, min_index: u64, mut exponents: Vec<u64>) -> Result<Self> {
        exponents.sort_unstable();
        if exponents.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("exponents must be distinct"));
        }
        if exponents.first().is_some_and(|&n| n < min_index) {
            return Err(Error::invalid("exponent below the minimum index"));
        }
        Ok(ExponentSum { zeta, min_index, exponents })
    }

    pub(crate) fn from_sorted(zeta: Turns, min_index: u64, exponents: Vec<u64>) -> Self {
        debug_assert!(exponents.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(exponents.iter().all(|&n| n >= min_index));
        ExponentSum { zeta, min_index, exponents }
    }

    pub fn empty(zeta: Turns, min_index: u64) -> Self {
        ExponentSum { zeta, min_index, exponents: Vec::new() }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn zeta(&self) -> Turns {
        self.zeta
    }

    pub fn min_index(&self) -> u64 {
        self.min_index
    }

    pub fn value(&self) -> Complex64 {
        self.exponents.iter().map(|&n| self.zeta.pow(n)).sum()
    }

    /// `Σ zⁿ` over the same exponents at another point.
    pub fn value_at(&self, z: Complex64) -> Complex64 {
        self.exponents.iter().map(|&n| cpow(z, n)).sum()
    }

    pub fn max_exponent(&self) -> Option<u64> {
        self.exponents.last().copied()
    }
}

/// Sum of distinct powers `ζⁿ`, `n ≥ min_index`, within `eps` of `w`.
///
/// The horizon of admissible exponents starts small and doubles up to
/// `horizon_cap`. Roots of unity of order other than 1, 2, 3, 4, 6 fall back
/// to writing `w` over `ℤ[ζ + ζ⁻¹]` when the greedy closure cannot reach `eps`
/// on the finite set of directions.
pub fn unimodular_sum_approx(
    w: Complex64,
    zeta: Turns,
    min_index: u64,
    eps: f64,
    horizon_cap: u64,
) -> Result<ExponentSum> {
    if !(eps > 0.0) {
        return Err(Error::invalid("eps must be positive"));
    }
    match zeta.kind() {
        ZetaKind::One | ZetaKind::MinusOne => {
            return Err(Error::InvalidZeta("powers of ±1 lie on a line".into()));
        }
        ZetaKind::Excluded(e) => {
            return Err(Error::InvalidZeta(format!("{e:?} generates a lattice; use the lattice branch")));
        }
        _ => {}
    }
    if w.norm() < eps {
        return Ok(ExponentSum::empty(zeta, min_index));
    }
    match zeta.kind() {
        ZetaKind::RootOfUnity(q) => {
            let copies = w.norm().ceil() as u64 + 4;
            let len = (q * copies).max(INITIAL_HORIZON).min(horizon_cap.max(q));
            let mut table = PowerTable::new(&zeta, 1.0, min_index, len);
            let out = greedy(&mut table, w);
            if out.error < eps {
                return ExponentSum::new(zeta, min_index, out.exponents);
            }
            cyclotomic_route(w, zeta, q, min_index, eps, horizon_cap)
        }
        _ => {
            let mut horizon = INITIAL_HORIZON.min(horizon_cap).max(1);
            loop {
                let mut table = PowerTable::new(&zeta, 1.0, min_index, horizon);
                let out = greedy(&mut table, w);
                if out.error < eps {
                    return ExponentSum::new(zeta, min_index, out.exponents);
                }
                if horizon >= horizon_cap {
                    return Err(Error::HorizonExhausted { cap: horizon_cap, eps });
                }
                horizon = (horizon * 2).min(horizon_cap);
            }
        }
    }
}

/// Writes `w ≈ x + yζ` with `x, y ∈ ℤ + ℤ(ζ + ζ⁻¹)` and turns the resulting
/// integer combination of `1, ζ, ζ², ζ^{q−1}` into nonnegative multiplicities by
/// adding full cycles `Σ_{k<q} ζ^k = 0`.
fn cyclotomic_route(
    w: Complex64,
    zeta: Turns,
    q: u64,
    min_index: u64,
    eps: f64,
    horizon_cap: u64,
) -> Result<ExponentSum> {
    let z = zeta.unit();
    let c = 2.0 * z.re;
    let y = w.im / z.im;
    let x = w.re - y * z.re;
    let tol = 0.45 * eps;
    let b_max = horizon_cap as i64;
    let exhausted = || Error::HorizonExhausted { cap: horizon_cap, eps };
    let (a1, b1) = greedy::approximate_real(x, c, tol, b_max).ok_or_else(exhausted)?;
    let (a2, b2) = greedy::approximate_real(y, c, tol, b_max).ok_or_else(exhausted)?;

    // x·1 + y·ζ ≈ a1 + b1(ζ + ζ^{q−1}) + a2ζ + b2(ζ² + 1)
    let q_us = q as usize;
    let mut counts = vec![0i64; q_us];
    counts[0] += a1 + b2;
    counts[1] += b1 + a2;
    counts[q_us - 1] += b1;
    counts[2 % q_us] += b2;
    let shift = counts.iter().copied().min().unwrap_or(0).min(0);
    let counts: Vec<u64> = counts.iter().map(|&c| (c - shift) as u64).collect();
    let max_count = counts.iter().copied().max().unwrap_or(0);
    if max_count.saturating_mul(q) > horizon_cap {
        return Err(exhausted());
    }
    let mut exponents: Vec<u64> = counts
        .iter()
        .enumerate()
        .flat_map(|(k, &c)| lattice::exponents_in_class(k as u64, q, min_index, c))
        .collect();
    exponents.sort_unstable();
    let sum = ExponentSum::from_sorted(zeta, min_index, exponents);
    if (sum.value() - w).norm() < eps {
        Ok(sum)
    } else {
        Err(exhausted())
    }
}

/// Greedy run restricted to exponents `min_index..min_index + horizon` of an
/// arbitrary base `b = ρ·e(x)`; returns the best sum found and its error,
/// whatever that error is.
pub fn greedy_best_effort(
    w: Complex64,
    angle: Turns,
    modulus: f64,
    min_index: u64,
    horizon: u64,
) -> (Vec<u64>, f64) {
    if w == ZERO {
        return (Vec::new(), 0.0);
    }
    let mut table = PowerTable::new(&angle, modulus, min_index, horizon);
    let out = greedy(&mut table, w);
    let mut e = out.exponents;
    e.sort_unstable();
    (e, out.error)
}

/// Sum of distinct powers within distance 1 of `w`.
pub fn one_net_sum(w: Complex64, zeta: Turns, min_index: u64) -> Result<ExponentSum> {
    match zeta.kind() {
        ZetaKind::One | ZetaKind::MinusOne => Err(Error::InvalidZeta("powers of ±1 lie on a line".into())),
        ZetaKind::Excluded(root) => {
            let p = lattice_round(w, root);
            Ok(reduce_full_cycles(&expand_nonneg(p, min_index), root))
        }
        _ => unimodular_sum_approx(w, zeta, min_index, 0.99, DEFAULT_HORIZON_CAP),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::ExcludedRoot;

    fn zeta_sqrt2() -> Turns {
        Turns::float(2f64.sqrt() / 10.0).unwrap()
    }

    #[test]
    fn target_in_the_set() {
        let z = zeta_sqrt2();
        let n0 = 5;
        let w = z.pow(n0 + 3) + z.pow(n0 + 7);
        let s = unimodular_sum_approx(w, z, n0, 1e-6, DEFAULT_HORIZON_CAP).unwrap();
        assert!((s.value() - w).norm() < 1e-6);
        assert!(s.exponents().iter().all(|&n| n >= n0));
    }

    #[test]
    fn zero_target_is_empty() {
        let s = unimodular_sum_approx(ZERO, zeta_sqrt2(), 0, 1e-3, 1024).unwrap();
        assert!(s.exponents().is_empty());
        assert_eq!(s.value(), ZERO);
    }

    #[test]
    fn rejects_excluded_roots() {
        for e in ExcludedRoot::ALL {
            assert!(matches!(
                unimodular_sum_approx(Complex64::new(1.0, 1.0), e.turns(), 0, 0.1, 1024),
                Err(Error::InvalidZeta(_))
            ));
        }
        let one = Turns::rational(0, 1).unwrap();
        assert!(matches!(unimodular_sum_approx(ZERO, one, 0, 0.1, 1024), Err(Error::InvalidZeta(_))));
    }

    #[test]
    fn tiny_cap_is_exhausted() {
        let r = unimodular_sum_approx(Complex64::new(3.0, 3.0), zeta_sqrt2(), 0, 1e-9, 32);
        assert!(matches!(r, Err(Error::HorizonExhausted { .. })));
    }

    #[test]
    fn fifth_root_small_eps_uses_cyclotomic_route() {
        let z = Turns::rational(1, 5).unwrap();
        let w = Complex64::new(0.3, -1.7);
        let s = unimodular_sum_approx(w, z, 3, 1e-3, DEFAULT_HORIZON_CAP).unwrap();
        assert!((s.value() - w).norm() < 1e-3);
        assert!(s.exponents().iter().all(|&n| n >= 3));
    }

    #[test]
    fn one_net_examples() {
        let i = Turns::rational(1, 4).unwrap();
        assert!(one_net_sum(ZERO, i, 0).unwrap().exponents().is_empty());
        let w = Complex64::new(7.0, -3.0);
        let s = one_net_sum(w, i, 0).unwrap();
        assert_eq!(lattice::exact_sum(ExcludedRoot::I, s.exponents()), LatticePoint::new(7, -3, ExcludedRoot::I));
        assert!((s.value() - w).norm() < 1.0);
        assert!(one_net_sum(w, Turns::rational(1, 2).unwrap(), 0).is_err());
    }
}
