//! Affine normalization `Λ ↦ (Λ − shift)/scale` and the matching target
//! correction `f_{λ+c}(z) = f_λ(z) + c/(1 − z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSet;
use crate::complex::{cpow, pair, ONE, ZERO};
use crate::error::{Error, Result};
use crate::series::SparseAssignment;

/// `λ = scale·λ' + shift` maps normalized coefficients back to the original set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform {
    #[serde(with = "pair")]
    pub scale: Complex64,
    #[serde(with = "pair")]
    pub shift: Complex64,
}

impl AffineTransform {
    pub fn new(scale: Complex64, shift: Complex64) -> Result<Self> {
        if scale == ZERO || !scale.re.is_finite() || !scale.im.is_finite() {
            return Err(Error::invalid("affine scale must be a nonzero finite complex number"));
        }
        Ok(AffineTransform { scale, shift })
    }

    pub fn identity() -> Self {
        AffineTransform { scale: ONE, shift: ZERO }
    }

    /// Original coordinates to normalized ones.
    pub fn forward(&self, z: Complex64) -> Complex64 {
        (z - self.shift) / self.scale
    }

    /// Normalized coordinates back to original ones.
    pub fn backward(&self, z: Complex64) -> Complex64 {
        self.scale * z + self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.scale == ONE && self.shift == ZERO
    }

    pub fn backward_assignment(&self, a: &SparseAssignment) -> SparseAssignment {
        a.map_values(|v| self.backward(v))
    }
}

/// Maps Λ to `(Λ − a)/(b − a)`, which contains 0 and 1.
pub fn normalize_affine(
    lambda: &CoefficientSet,
    a: Complex64,
    b: Complex64,
) -> Result<(CoefficientSet, AffineTransform)> {
    if a == b {
        return Err(Error::invalid("normalization needs two distinct elements"));
    }
    let (ia, ib) = match (lambda.position(a), lambda.position(b)) {
        (Some(ia), Some(ib)) => (ia, ib),
        _ => return Err(Error::invalid("normalization anchors must belong to the coefficient set")),
    };
    let (a, b) = (lambda.elements()[ia], lambda.elements()[ib]);
    let t = AffineTransform::new(b - a, a)?;
    let mapped = lambda.elements().iter().map(|&z| {
        // The anchors map to exactly 0 and 1.
        if z == a {
            ZERO
        } else if z == b {
            ONE
        } else {
            t.forward(z)
        }
    });
    Ok((CoefficientSet::new(mapped)?, t))
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.norm() < 1.0) {
        return Err(Error::invalid("transport needs |τ| < 1"));
    }
    Ok(())
}

/// Target in normalized coordinates for the infinite series:
/// `w' = (w − shift/(1 − τ)) / scale`.
pub fn transport_target(w: Complex64, tau: Complex64, t: &AffineTransform) -> Result<Complex64> {
    check_tau(tau)?;
    Ok((w - t.shift / (ONE - tau)) / t.scale)
}

/// `(1 − τ^{K+1})/(1 − τ) = Σ_{n ≤ K} τⁿ`.
pub fn truncated_geometric(tau: Complex64, last_index: u64) -> Complex64 {
    (ONE - cpow(tau, last_index + 1)) / (ONE - tau)
}

/// Same as [`transport_target`] for a dense assignment ending at `last_index`.
pub fn transport_target_truncated(
    w: Complex64,
    tau: Complex64,
    t: &AffineTransform,
    last_index: u64,
) -> Result<Complex64> {
    check_tau(tau)?;
    Ok((w - t.shift * truncated_geometric(tau, last_index)) / t.scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eval_prefix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_point_normalization() {
        let l = CoefficientSet::from_pairs(&[(2.0, 0.0), (2.0, 4.0)]).unwrap();
        let (n, t) = normalize_affine(&l, c(2.0, 0.0), c(2.0, 4.0)).unwrap();
        assert!(n.same_set(&CoefficientSet::from_reals(&[0.0, 1.0]).unwrap()));
        assert_eq!(t.scale, c(0.0, 4.0));
        assert_eq!(t.shift, c(2.0, 0.0));
    }

    #[test]
    fn identity_case() {
        let l = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
        let (n, t) = normalize_affine(&l, ZERO, ONE).unwrap();
        assert!(t.is_identity());
        assert!(n.same_set(&l));
    }

    #[test]
    fn four_roots_elementwise() {
        let l = CoefficientSet::from_pairs(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]).unwrap();
        let (n, _) = normalize_affine(&l, c(-1.0, 0.0), ONE).unwrap();
        // Elementwise (λ + 1)/2 computed by hand.
        let expected = CoefficientSet::from_pairs(&[(0.0, 0.0), (0.5, 0.5), (1.0, 0.0), (0.5, -0.5)]).unwrap();
        assert!(n.same_set(&expected));
    }

    #[test]
    fn rejects_bad_anchors() {
        let l = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
        assert!(normalize_affine(&l, ONE, ONE).is_err());
        assert!(normalize_affine(&l, ZERO, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn transport_examples() {
        let id = AffineTransform::identity();
        assert_eq!(transport_target(c(1.5, -2.0), c(0.3, 0.1), &id).unwrap(), c(1.5, -2.0));

        let half = AffineTransform::new(ONE, c(-0.5, 0.0)).unwrap();
        assert_eq!(transport_target(c(-0.5, 0.0), ZERO, &half).unwrap(), ZERO);

        let t = AffineTransform::new(c(0.0, 4.0), c(2.0, 0.0)).unwrap();
        let w2 = transport_target(c(10.0, 0.0), c(0.5, 0.0), &t).unwrap();
        assert!((w2 - c(0.0, -1.5)).norm() < 1e-15);
        assert!(transport_target(ZERO, ONE, &t).is_err());
    }

    #[test]
    fn truncated_transport_round_trips_through_eval() {
        // A normalized assignment hitting w' exactly, mapped back, hits w.
        let t = AffineTransform::new(c(0.0, 4.0), c(2.0, 0.0)).unwrap();
        let tau = c(0.5, 0.0);
        let normalized = SparseAssignment::dense(&[ONE, ZERO, ONE, ONE, ZERO]);
        let w_norm = eval_prefix(&normalized, tau).unwrap();
        let original = t.backward_assignment(&normalized);
        let w = eval_prefix(&original, tau).unwrap();
        let back = transport_target_truncated(w, tau, &t, 4).unwrap();
        assert!((back - w_norm).norm() < 1e-14);
    }

    #[test]
    fn forward_backward_round_trip() {
        let t = AffineTransform::new(c(0.3, -1.7), c(-2.0, 0.25)).unwrap();
        for z in [c(0.0, 0.0), c(1.0, 1.0), c(-3.5, 2.25), c(1e3, -1e3)] {
            let r = t.backward(t.forward(z));
            assert!((r - z).norm() <= 1e-14 * (1.0 + z.norm()));
        }
        assert!(AffineTransform::new(ZERO, ONE).is_err());
    }
}
