//! Open regions `U ⊆ D` built from disks and wedges, with a boundary
//! accumulation point ζ.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Turns;
use crate::complex::{pair, wrap_angle};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    /// Open disk, intersected with the unit disk.
    Disk {
        #[serde(with = "pair")]
        center: Complex64,
        radius: f64,
    },
    /// `{re_lo < Re z < re_hi, |arg z − arg_center| < half_angle}` inside the unit disk.
    Wedge { re_lo: f64, re_hi: f64, arg_center: f64, half_angle: f64 },
}

impl Piece {
    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.norm() < 1.0) {
            return false;
        }
        match *self {
            Piece::Disk { center, radius } => (z - center).norm() < radius,
            Piece::Wedge { re_lo, re_hi, arg_center, half_angle } => {
                z != Complex64::new(0.0, 0.0)
                    && re_lo < z.re
                    && z.re < re_hi
                    && wrap_angle(z.arg() - arg_center).abs() < half_angle
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Piece::Disk { center, radius } => {
                if !(radius > 0.0) || !center.re.is_finite() || !center.im.is_finite() {
                    return Err(Error::invalid("disk needs a finite center and positive radius"));
                }
                if center.norm() - radius >= 1.0 {
                    return Err(Error::invalid("disk does not meet the unit disk"));
                }
            }
            Piece::Wedge { re_lo, re_hi, half_angle, .. } => {
                if !(half_angle > 0.0) || !(re_lo < re_hi) {
                    return Err(Error::invalid("wedge needs re_lo < re_hi and a positive half-angle"));
                }
            }
        }
        Ok(())
    }

    /// Random point of the piece (not area-uniform for wedges). `None` when a
    /// bounded number of draws all miss.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Complex64> {
        for _ in 0..256 {
            let z = match *self {
                Piece::Disk { center, radius } => {
                    let r = radius * rng.random::<f64>().sqrt();
                    center + Complex64::from_polar(r, TAU * rng.random::<f64>())
                }
                Piece::Wedge { re_lo, re_hi, arg_center, half_angle } => {
                    let theta = arg_center + half_angle * (2.0 * rng.random::<f64>() - 1.0);
                    let c = theta.cos();
                    let (mut lo, mut hi) = (0.0f64, 1.0f64);
                    if c > 0.0 {
                        lo = lo.max(re_lo / c);
                        hi = hi.min(re_hi / c);
                    } else if c < 0.0 {
                        lo = lo.max(re_hi / c);
                        hi = hi.min(re_lo / c);
                    } else if !(re_lo < 0.0 && 0.0 < re_hi) {
                        continue;
                    }
                    if !(lo < hi) {
                        continue;
                    }
                    Complex64::from_polar(lo + (hi - lo) * rng.random::<f64>(), theta)
                }
            };
            if self.contains(z) {
                return Some(z);
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub pieces: Vec<Piece>,
    pub accumulation_point: Turns,
}

impl RegionSpec {
    /// Validated region: every piece meets the unit disk and ζ is reached
    /// within `10^{-k}` for `k = 1..=6`.
    pub fn new(pieces: Vec<Piece>, accumulation_point: Turns) -> Result<Self> {
        let r = Self::new_unchecked(pieces, accumulation_point)?;
        if let Some(k) = r.accumulation_failure() {
            return Err(Error::invalid(format!(
                "region has no point within 1e-{k} of its accumulation point"
            )));
        }
        Ok(r)
    }

    /// Only checks the pieces themselves; ζ is recorded as given.
    pub fn new_unchecked(pieces: Vec<Piece>, accumulation_point: Turns) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::invalid("region needs at least one piece"));
        }
        for p in &pieces {
            p.validate()?;
        }
        Ok(RegionSpec { pieces, accumulation_point })
    }

    /// `Disk(c·ζ, radius) ∩ D` accumulating at ζ.
    pub fn disk_toward(zeta: Turns, center_modulus: f64, radius: f64) -> Result<Self> {
        let center = zeta.unit() * center_modulus;
        Self::new(vec![Piece::Disk { center, radius }], zeta)
    }

    pub fn zeta(&self) -> Complex64 {
        self.accumulation_point.unit()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.pieces.iter().any(|p| p.contains(z))
    }

    /// Some point of the region within `radius` of ζ, searching a small polar
    /// grid around ζ.
    pub fn point_near_zeta(&self, radius: f64) -> Option<Complex64> {
        let zeta = self.zeta();
        let theta = zeta.arg();
        for s in [0.5, 0.25, 0.75, 0.125, 0.9] {
            for t in [0.0, 0.25, -0.25, 0.5, -0.5, 0.125, -0.125, 0.75, -0.75] {
                let z = Complex64::from_polar(1.0 - s * radius, theta + t * radius);
                if (z - zeta).norm() < radius && self.contains(z) {
                    return Some(z);
                }
            }
        }
        None
    }

    fn accumulation_failure(&self) -> Option<u32> {
        (1..=6).find(|&k| self.point_near_zeta(10f64.powi(-(k as i32))).is_none())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Complex64> {
        for _ in 0..64 {
            let i = rng.random_range(0..self.pieces.len());
            if let Some(z) = self.pieces[i].sample(rng) {
                return Some(z);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_toward_boundary_point_validates() {
        let zeta = Turns::float(2f64.sqrt() / 10.0).unwrap();
        let r = RegionSpec::disk_toward(zeta, 0.95, 0.1).unwrap();
        assert!(r.contains(zeta.unit() * 0.99));
        assert!(!r.contains(zeta.unit() * 1.01));
    }

    #[test]
    fn disk_away_from_zeta_is_rejected() {
        let zeta = Turns::rational(1, 8).unwrap();
        let pieces = vec![Piece::Disk { center: Complex64::new(0.0, 0.0), radius: 0.5 }];
        assert!(RegionSpec::new(pieces.clone(), zeta).is_err());
        assert!(RegionSpec::new_unchecked(pieces, zeta).is_ok());
    }

    #[test]
    fn wedge_membership() {
        let w = Piece::Wedge { re_lo: -0.5, re_hi: 0.0, arg_center: std::f64::consts::PI, half_angle: 0.1 };
        assert!(w.contains(Complex64::new(-0.3, 0.01)));
        assert!(w.contains(Complex64::new(-0.3, -0.01)));
        assert!(!w.contains(Complex64::new(-0.6, 0.0)));
        assert!(!w.contains(Complex64::new(-0.3, 0.1)));
    }

    #[test]
    fn samples_land_inside() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let wedge = Piece::Wedge { re_lo: 0.0, re_hi: 0.9, arg_center: 0.0, half_angle: 0.01 };
        let region = RegionSpec::new_unchecked(vec![wedge], Turns::rational(0, 1).unwrap()).unwrap();
        for _ in 0..1000 {
            let z = region.sample(&mut rng).unwrap();
            assert!(region.contains(z));
        }
    }
}
