//! Finite power-series prefixes and the geometric tail bound.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffs::CoefficientSet;
use crate::complex::{cpow, ZERO};
use crate::error::{Error, Result};

/// Relative inflation applied to every rigorous bound.
pub const BOUND_INFLATION: f64 = 1e-12;

/// A finite set of `(index, coefficient)` pairs with strictly increasing indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseAssignment {
    terms: Vec<(u64, Complex64)>,
}

impl SparseAssignment {
    pub fn new(terms: Vec<(u64, Complex64)>) -> Result<Self> {
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("assignment indices must be strictly increasing"));
        }
        Ok(SparseAssignment { terms })
    }

    pub fn empty() -> Self {
        SparseAssignment::default()
    }

    /// Coefficients at indices `0..values.len()`.
    pub fn dense(values: &[Complex64]) -> Self {
        SparseAssignment { terms: values.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect() }
    }

    pub fn terms(&self) -> &[(u64, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// First index not covered by the assignment (0 when empty).
    pub fn end(&self) -> u64 {
        self.max_index().map_or(0, |m| m + 1)
    }

    /// True when every index `0..=max_index` is listed.
    pub fn is_contiguous(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, t)| t.0 == i as u64)
    }

    pub fn get(&self, index: u64) -> Option<Complex64> {
        self.terms.binary_search_by_key(&index, |t| t.0).ok().map(|i| self.terms[i].1)
    }

    /// Index of the first value not in `lambda`, if any.
    pub fn first_foreign_value(&self, lambda: &CoefficientSet) -> Option<u64> {
        self.terms.iter().find(|t| !lambda.contains(t.1)).map(|t| t.0)
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        SparseAssignment { terms: self.terms.iter().map(|&(n, v)| (n, f(v))).collect() }
    }
}

impl Serialize for SparseAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            terms: Vec<(u64, [f64; 2])>,
        }
        let terms = self.terms.iter().map(|&(n, v)| (n, [v.re, v.im])).collect();
        Raw { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseAssignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<(u64, [f64; 2])>,
        }
        let raw = Raw::deserialize(d)?;
        let terms = raw.terms.into_iter().map(|(n, [re, im])| (n, Complex64::new(re, im))).collect();
        SparseAssignment::new(terms).map_err(serde::de::Error::custom)
    }
}

fn check_inside(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::invalid(format!("evaluation point must satisfy |z| < 1, got |z| = {}", z.norm())));
    }
    Ok(())
}

/// `Σ value·z^index` over the listed terms, accumulated Horner-style across gaps.
pub fn eval_prefix(assignment: &SparseAssignment, z: Complex64) -> Result<Complex64> {
    check_inside(z)?;
    Ok(eval_unchecked(assignment.terms(), z))
}

pub(crate) fn eval_unchecked(terms: &[(u64, Complex64)], z: Complex64) -> Complex64 {
    let mut acc = ZERO;
    let mut prev: Option<u64> = None;
    for &(n, v) in terms.iter().rev() {
        if let Some(p) = prev {
            acc *= cpow(z, p - n);
        }
        acc += v;
        prev = Some(n);
    }
    match prev {
        Some(first) => acc * cpow(z, first),
        None => ZERO,
    }
}

/// `sup_modulus · r^start / (1 − r)`, inflated by `1 + 1e−12`: bounds
/// `|Σ_{n ≥ start} λ_n zⁿ|` for every `|z| ≤ r` and `|λ_n| ≤ sup_modulus`.
pub fn tail_bound(sup_modulus: f64, r: f64, start_index: u64) -> Result<f64> {
    if !(sup_modulus >= 0.0) || !(r >= 0.0) {
        return Err(Error::invalid("tail bound needs nonnegative inputs"));
    }
    if !(r < 1.0) {
        return Err(Error::invalid(format!("tail bound needs r < 1, got {r}")));
    }
    if sup_modulus == 0.0 {
        return Ok(0.0);
    }
    let power = if start_index == 0 { 1.0 } else { r.powf(start_index as f64) };
    Ok(sup_modulus * power / (1.0 - r) * (1.0 + BOUND_INFLATION))
}

/// Smallest `K` with `tail_bound(sup, r, K) < target`.
pub fn tail_cutoff(sup_modulus: f64, r: f64, target: f64) -> Result<u64> {
    if !(target > 0.0) {
        return Err(Error::invalid("tail target must be positive"));
    }
    let b0 = tail_bound(sup_modulus, r, 0)?;
    if b0 < target {
        return Ok(0);
    }
    // r^K < target(1−r)/(sup(1+inflation))
    let ratio = target * (1.0 - r) / (sup_modulus * (1.0 + BOUND_INFLATION));
    let mut k = (ratio.ln() / r.ln()).ceil().max(0.0) as u64;
    while tail_bound(sup_modulus, r, k)? >= target {
        k += 1;
    }
    while k > 0 && tail_bound(sup_modulus, r, k - 1)? < target {
        k -= 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ONE;

    #[test]
    fn geometric_prefix() {
        let a = SparseAssignment::dense(&[ONE; 4]);
        let v = eval_prefix(&a, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 1.875).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn empty_sum_is_zero() {
        let v = eval_prefix(&SparseAssignment::empty(), Complex64::new(0.3, 0.2)).unwrap();
        assert_eq!(v, ZERO);
    }

    #[test]
    fn odd_indicator_matches_closed_form_minus_tail() {
        let terms: Vec<_> = (0..16).map(|k| (2 * k + 1, ONE)).collect();
        let a = SparseAssignment::new(terms).unwrap();
        let z = 0.5f64;
        let v = eval_prefix(&a, Complex64::new(z, 0.0)).unwrap();
        // z/(1−z²) minus Σ_{k≥16} z^{2k+1} = z^{33}/(1−z²)
        let expected = z / (1.0 - z * z) - z.powi(33) / (1.0 - z * z);
        assert!((v.re - expected).abs() <= 1e-9 * (1.0 + 2.0 / 3.0));
    }

    #[test]
    fn rejects_points_outside_disk() {
        assert!(eval_prefix(&SparseAssignment::empty(), Complex64::new(1.0, 0.0)).is_err());
        assert!(eval_prefix(&SparseAssignment::empty(), Complex64::new(0.8, 0.7)).is_err());
    }

    #[test]
    fn rejects_unordered_terms() {
        assert!(SparseAssignment::new(vec![(2, ONE), (1, ONE)]).is_err());
        assert!(SparseAssignment::new(vec![(2, ONE), (2, ONE)]).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(tail_bound(1.0, 0.5, 4).unwrap(), 0.125 * (1.0 + 1e-12));
        assert_eq!(tail_bound(0.0, 0.9, 0).unwrap(), 0.0);
        assert!(tail_bound(1.0, 1.0, 3).is_err());
        assert!(tail_bound(-1.0, 0.5, 3).is_err());
    }

    #[test]
    fn tail_bound_matches_partial_summation() {
        // Direct summation of 10^5 terms as an independent oracle.
        let (s, r, n) = (2.0f64, 0.99f64, 100u64);
        let mut direct = 0.0;
        let mut p = r.powi(n as i32);
        for _ in 0..100_000 {
            direct += s * p;
            p *= r;
        }
        let b = tail_bound(s, r, n).unwrap();
        assert!((b - direct).abs() <= 1e-10 * direct);
        assert!(b >= direct);
    }

    #[test]
    fn cutoff_is_minimal() {
        let k = tail_cutoff(1.0, 0.9, 1e-3).unwrap();
        assert!(tail_bound(1.0, 0.9, k).unwrap() < 1e-3);
        assert!(tail_bound(1.0, 0.9, k - 1).unwrap() >= 1e-3);
    }

    #[test]
    fn json_shape() {
        let a = SparseAssignment::new(vec![(0, ONE), (3, Complex64::new(0.0, 1.0))]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"terms":[[0,[1.0,0.0]],[3,[0.0,1.0]]]}"#);
        let back: SparseAssignment = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
