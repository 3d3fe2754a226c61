use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::pair;
use crate::series::SparseAssignment;

/// A finite witness that `|f(τ) − target| < ε` for every coefficient
/// sequence in Ω that agrees with `assignment` on its listed indices, takes
/// the value 0 at unlisted indices below the largest listed one, and is
/// arbitrary afterwards. Gaps are therefore only meaningful when 0 ∈ Λ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "pair")]
    pub tau: Complex64,
    pub assignment: SparseAssignment,
    #[serde(with = "pair")]
    pub target: Complex64,
    pub epsilon: f64,
    pub achieved_error: f64,
    pub tail_bound: f64,
}

impl Certificate {
    pub fn margin(&self) -> f64 {
        self.epsilon - self.achieved_error - self.tail_bound
    }
}
