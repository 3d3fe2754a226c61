//! Small helpers on top of `num_complex::Complex64`: the `[re, im]` JSON
//! encoding, integer powers with 64-bit exponents and the `[0, 2π)` argument.

use std::f64::consts::TAU;

pub use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Argument normalized to `[0, 2π)`.
pub fn arg0(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    let a = if a < 0.0 { a + TAU } else { a };
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed angular difference `a − b` wrapped into `(−π, π]`.
pub fn wrap_angle(d: f64) -> f64 {
    let mut d = d % TAU;
    if d > std::f64::consts::PI {
        d -= TAU;
    } else if d <= -std::f64::consts::PI {
        d += TAU;
    }
    d
}

/// `z^n` by binary exponentiation; `z^0 = 1`.
pub fn cpow(z: Complex64, mut n: u64) -> Complex64 {
    let mut acc = ONE;
    let mut base = z;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        n >>= 1;
        if n > 0 {
            base = base * base;
        }
    }
    acc
}

/// `e(x) = exp(2πix)`.
pub fn e_turns(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

/// Serde adapter: a complex number as a two-element array `[re, im]`.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Serde adapter for `Vec<Complex64>` as a list of `[re, im]` pairs.
pub mod pair_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// Parses a JSON `[re, im]` pair.
pub fn parse_pair(s: &str) -> Result<Complex64, serde_json::Error> {
    let [re, im]: [f64; 2] = serde_json::from_str(s)?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cpow_matches_powu() {
        let z = Complex64::new(0.3, -0.7);
        for n in [0u32, 1, 2, 7, 31, 100] {
            let a = cpow(z, n as u64);
            let b = z.powu(n);
            assert!((a - b).norm() <= 1e-14 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn arg0_range() {
        assert_eq!(arg0(Complex64::new(1.0, 0.0)), 0.0);
        assert!((arg0(Complex64::new(-1.0, -0.0)) - std::f64::consts::PI).abs() < 1e-15);
        assert!((arg0(Complex64::new(0.0, -1.0)) - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }
}
