use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::pair_vec;
use crate::error::{Error, Result};

/// Tolerance used when deciding whether a value belongs to a coefficient set.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// A finite set Λ of admissible coefficients.
///
/// Duplicates are dropped on construction; the order of first occurrence is
/// kept so that every "first minimal element" tie-break is reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    elements: Vec<Complex64>,
    sup_modulus: f64,
}

impl CoefficientSet {
    pub fn new(values: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        let mut elements: Vec<Complex64> = Vec::new();
        for v in values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::invalid("coefficient values must be finite"));
            }
            if !elements.contains(&v) {
                elements.push(v);
            }
        }
        if elements.len() < 2 {
            return Err(Error::invalid("a coefficient set needs at least two distinct elements"));
        }
        let sup_modulus = elements.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(CoefficientSet { elements, sup_modulus })
    }

    /// Convenience constructor from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)))
    }

    /// Real-valued coefficient set.
    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sup_modulus(&self) -> f64 {
        self.sup_modulus
    }

    /// Index of the element equal to `z` up to [`MEMBERSHIP_TOL`].
    pub fn position(&self, z: Complex64) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| (e - z).norm() <= MEMBERSHIP_TOL * (1.0 + e.norm()))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.position(z).is_some()
    }

    pub fn contains_zero(&self) -> bool {
        self.elements.iter().any(|e| *e == Complex64::new(0.0, 0.0))
    }

    /// Element of least modulus, first in insertion order among ties.
    pub fn min_modulus_element(&self) -> Complex64 {
        let mut best = self.elements[0];
        for &e in &self.elements[1..] {
            if e.norm() < best.norm() {
                best = e;
            }
        }
        best
    }

    /// Every element is real (imaginary part exactly zero).
    pub fn is_real(&self) -> bool {
        self.elements.iter().all(|e| e.im == 0.0)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.elements.iter().map(|&z| f(z)))
    }

    /// Same set up to membership tolerance, ignoring order.
    pub fn same_set(&self, other: &CoefficientSet) -> bool {
        self.len() == other.len() && self.elements.iter().all(|&z| other.contains(z))
    }
}

impl Serialize for CoefficientSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        pair_vec::serialize(&self.elements, s)
    }
}

impl<'de> Deserialize<'de> for CoefficientSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = pair_vec::deserialize(d)?;
        CoefficientSet::new(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_singletons() {
        assert!(CoefficientSet::from_reals(&[1.0]).is_err());
        assert!(CoefficientSet::from_reals(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn sup_modulus_is_exact_max() {
        let l = CoefficientSet::from_pairs(&[(0.0, 0.0), (3.0, 4.0), (-1.0, 0.0)]).unwrap();
        assert_eq!(l.sup_modulus(), 5.0);
        assert_eq!(l.min_modulus_element(), Complex64::new(0.0, 0.0));
        assert!(l.contains_zero());
    }

    #[test]
    fn json_is_pair_list() {
        let l: CoefficientSet = serde_json::from_str("[[0,0],[1,0]]").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(serde_json::to_string(&l).unwrap(), "[[0.0,0.0],[1.0,0.0]]");
    }
}
