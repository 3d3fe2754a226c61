//! Independent re-check of a certificate.

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::coeffs::CoefficientSet;
use crate::region::RegionSpec;
use crate::series::{eval_unchecked, tail_bound};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    /// `ε − error − tail`, all recomputed.
    pub margin: f64,
    pub tau_in_region: bool,
    pub achieved_error: f64,
    pub tail_bound: f64,
    pub issues: Vec<String>,
}

/// Recomputes error and tail from scratch and checks τ, the coefficient
/// values, and (when 0 ∉ Λ) that no index below the last listed one is
/// left implicit. Never fails; problems are listed in `issues`.
pub fn verify_certificate(lambda: &CoefficientSet, cert: &Certificate, region: &RegionSpec) -> VerifyReport {
    let mut issues = Vec::new();
    let tau = cert.tau;
    let inside = tau.norm() < 1.0;
    if !inside {
        issues.push(format!("|tau| = {} is not below 1", tau.norm()));
    }
    let tau_in_region = region.contains(tau);
    if !tau_in_region {
        issues.push("tau lies outside the region".into());
    }
    if let Some(n) = cert.assignment.first_foreign_value(lambda) {
        issues.push(format!("coefficient at index {n} is not in the coefficient set"));
    }
    if !lambda.contains_zero() && !cert.assignment.is_contiguous() {
        issues.push("assignment has gaps but 0 is not a coefficient".into());
    }
    if !(cert.epsilon > 0.0) {
        issues.push("epsilon must be positive".into());
    }

    let (achieved_error, tail) = if inside {
        let value = eval_unchecked(cert.assignment.terms(), tau);
        let tail = tail_bound(lambda.sup_modulus(), tau.norm(), cert.assignment.end()).unwrap_or(f64::INFINITY);
        ((value - cert.target).norm(), tail)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let slack = 1e-12 * (1.0 + cert.target.norm());
    if (achieved_error - cert.achieved_error).abs() > slack {
        issues.push(format!("recorded error {} differs from recomputed {}", cert.achieved_error, achieved_error));
    }
    if (tail - cert.tail_bound).abs() > slack {
        issues.push(format!("recorded tail bound {} differs from recomputed {}", cert.tail_bound, tail));
    }
    let margin = cert.epsilon - achieved_error - tail;
    if !(margin > 0.0) {
        issues.push(format!("error + tail exceeds epsilon (margin {margin})"));
    }
    VerifyReport { valid: issues.is_empty(), margin, tau_in_region, achieved_error, tail_bound: tail, issues }
}
