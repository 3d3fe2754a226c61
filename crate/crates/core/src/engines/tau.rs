//! Choice of the evaluation point τ near the boundary point ζ.

use num_complex::Complex64;

use crate::complex::ONE;
use crate::error::{Error, Result};
use crate::region::RegionSpec;

const SHRINKS: i32 = 40;
const ANGULAR: [f64; 5] = [0.0, 0.3, -0.3, 0.6, -0.6];

/// Constraint on `|τ|^M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModulusTarget {
    Free,
    /// `|τ|^M = ε₀` up to rounding.
    Exact(f64),
    /// `lo < |τ|^M < hi`.
    Interval { lo: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauChoice {
    pub tau: Complex64,
    pub power: Option<u64>,
}

/// Smallest `M ≥ 1` with `r^M < hi`, provided `r^M > lo` as well.
pub fn annulus_power(r: f64, lo: f64, hi: f64) -> Option<u64> {
    if !(r > 0.0 && r < 1.0) || !(lo < hi) || !(hi > 0.0) {
        return None;
    }
    let mut m = ((hi.ln() / r.ln()).floor().max(0.0) as u64).max(1);
    while r.powf(m as f64) >= hi {
        m += 1;
    }
    while m > 1 && r.powf((m - 1) as f64) < hi {
        m -= 1;
    }
    (r.powf(m as f64) > lo).then_some(m)
}

/// A point τ of the region with `|τ − ζ| < delta`, searched on polar grids
/// around ζ that shrink by half up to 40 times.
pub fn select_tau(region: &RegionSpec, delta: f64, target: ModulusTarget) -> Result<TauChoice> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    match target {
        ModulusTarget::Exact(e) if !(e > 0.0 && e < 1.0) => {
            return Err(Error::invalid("modulus target must lie in (0, 1)"));
        }
        ModulusTarget::Interval { lo, hi } if !(lo > 0.0 && lo < hi && hi < 1.0) => {
            return Err(Error::invalid("modulus interval must satisfy 0 < lo < hi < 1"));
        }
        _ => {}
    }
    let zeta = region.zeta();
    for j in 0..SHRINKS {
        let scale = delta * 0.5f64.powi(j);
        for s in [0.95, 0.6, 0.3] {
            for t in ANGULAR {
                let rot = if t == 0.0 { ONE } else { Complex64::from_polar(1.0, t * scale) };
                let (rho, power) = match target {
                    ModulusTarget::Free => (1.0 - s * scale, None),
                    ModulusTarget::Exact(e0) => {
                        // smallest M with e0^{1/M} > 1 − s'·scale
                        let floor = 1.0 - (s + 0.05) * scale;
                        let m = ((e0.ln() / floor.ln()).floor() as u64 + 1).max(1);
                        ((e0.ln() / m as f64).exp(), Some(m))
                    }
                    ModulusTarget::Interval { lo, hi } => {
                        let rho = 1.0 - s * scale;
                        match annulus_power(rho, lo, hi) {
                            Some(m) => (rho, Some(m)),
                            None => continue,
                        }
                    }
                };
                let tau = zeta * rot * rho;
                if (tau - zeta).norm() < delta && tau.norm() < 1.0 && region.contains(tau) {
                    return Ok(TauChoice { tau, power });
                }
            }
        }
    }
    Err(Error::RegionTooThin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Turns;

    #[test]
    fn feasibility_only() {
        let zeta = Turns::rational(1, 8).unwrap();
        let region = RegionSpec::disk_toward(zeta, 0.9, 0.2).unwrap();
        let c = select_tau(&region, 0.2, ModulusTarget::Free).unwrap();
        assert!(region.contains(c.tau));
        assert!((c.tau - zeta.unit()).norm() < 0.2);
        assert_eq!(c.power, None);
    }

    #[test]
    fn exact_modulus_at_minus_one() {
        let zeta = Turns::rational(1, 2).unwrap();
        let region = RegionSpec::disk_toward(zeta, 0.95, 0.1).unwrap();
        let c = select_tau(&region, 0.1, ModulusTarget::Exact(0.5)).unwrap();
        assert_eq!(c.power, Some(7));
        assert!((c.tau.re + 0.5f64.powf(1.0 / 7.0)).abs() < 1e-15);
        assert!((c.tau.norm().powi(7) - 0.5).abs() < 1e-9 * 0.5);
    }

    #[test]
    fn annulus_range() {
        let ms: Vec<u64> = (1..400).filter(|&m| {
            let v = 0.99f64.powf(m as f64);
            0.2 < v && v < 1.0 / 3.0
        }).collect();
        assert_eq!(annulus_power(0.99, 0.2, 1.0 / 3.0), ms.first().copied());
        assert_eq!(ms.first(), Some(&110));
        assert_eq!(annulus_power(0.5, 0.2, 0.25), None);
    }

    #[test]
    fn thin_region() {
        let zeta = Turns::rational(1, 8).unwrap();
        let pieces = vec![crate::region::Piece::Disk { center: Complex64::new(-0.5, 0.0), radius: 0.1 }];
        let region = RegionSpec::new_unchecked(pieces, zeta).unwrap();
        assert_eq!(select_tau(&region, 0.2, ModulusTarget::Free), Err(Error::RegionTooThin));
    }
}
