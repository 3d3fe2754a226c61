//! Certificate builders for the three density theorems, plus the
//! independent certificate verifier.

mod theorem1;
mod theorem2;
mod theorem3;
pub mod tau;
pub mod verify;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::affine::{normalize_affine, AffineTransform};
use crate::angle::ZetaKind;
use crate::certificate::Certificate;
use crate::coeffs::CoefficientSet;
use crate::complex::{pair_vec, ONE, ZERO};
use crate::error::{Error, Result};
use crate::nets::DEFAULT_HORIZON_CAP;
use crate::region::RegionSpec;
use crate::series::{eval_unchecked, tail_bound, tail_cutoff, SparseAssignment};

pub use tau::{annulus_power, select_tau, ModulusTarget, TauChoice};
pub use theorem1::approx_theorem1;
pub use theorem2::approx_theorem2;
pub use theorem3::approx_theorem3;
pub use verify::{verify_certificate, VerifyReport};

/// Fixed leading coefficients `λ₀..λ_N`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrefixConstraint {
    #[serde(with = "pair_vec")]
    pub values: Vec<Complex64>,
}

impl PrefixConstraint {
    pub fn new(values: Vec<Complex64>) -> Self {
        PrefixConstraint { values }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// First free index, `N + 1`.
    pub fn free_start(&self) -> u64 {
        self.values.len() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineParams {
    /// Upper bound for `|τ − ζ|`, at most 2/5.
    pub delta_cap: f64,
    pub horizon_cap: u64,
    /// Overrides the engine's own choice of ε₀ (Theorems 2 and 3).
    pub epsilon0: Option<f64>,
    pub seed: u64,
    pub max_attempts: u32,
    /// Largest number of explicit terms a certificate may carry.
    pub max_terms: u64,
}

impl Default for EngineParams {
    fn default() -> Self {
        EngineParams {
            delta_cap: 0.4,
            horizon_cap: DEFAULT_HORIZON_CAP,
            epsilon0: None,
            seed: 0,
            max_attempts: 40,
            max_terms: 20_000_000,
        }
    }
}

/// How a certificate was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineTrace {
    pub theorem: u8,
    pub branch: String,
    pub transform: AffineTransform,
    /// Annulus / lattice scale ε₀.
    pub epsilon0: Option<f64>,
    /// The power `M` with `|τ^M|` tied to ε₀.
    pub power: Option<u64>,
    /// `(first index, length)` of the block reserved for the lattice combination.
    pub reserved_block: Option<(u64, u64)>,
    pub r_star: Option<f64>,
    /// Largest partial sum over the scheduled indices.
    pub max_partial_sum: Option<f64>,
    pub delta: f64,
    pub attempts: u32,
}

impl EngineTrace {
    fn new(theorem: u8, branch: &str, transform: AffineTransform) -> Self {
        EngineTrace {
            theorem,
            branch: branch.into(),
            transform,
            epsilon0: None,
            power: None,
            reserved_block: None,
            r_star: None,
            max_partial_sum: None,
            delta: 0.0,
            attempts: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineOutput {
    pub certificate: Certificate,
    pub trace: EngineTrace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremChoice {
    Auto,
    One,
    Two,
    Three,
}

/// Runs the engine matching ζ: ζ ≠ ±1 → Theorem 1, ζ = −1 → Theorem 2,
/// ζ = 1 → Theorem 3.
pub fn approximate(
    choice: TheoremChoice,
    lambda: &CoefficientSet,
    region: &RegionSpec,
    prefix: &PrefixConstraint,
    w: Complex64,
    eps: f64,
    params: &EngineParams,
) -> Result<EngineOutput> {
    let choice = match (choice, region.accumulation_point.kind()) {
        (TheoremChoice::Auto, ZetaKind::MinusOne) => TheoremChoice::Two,
        (TheoremChoice::Auto, ZetaKind::One) => TheoremChoice::Three,
        (TheoremChoice::Auto, _) => TheoremChoice::One,
        (c, _) => c,
    };
    match choice {
        TheoremChoice::Two => approx_theorem2(lambda, region, prefix, w, eps, params),
        TheoremChoice::Three => approx_theorem3(lambda, region, prefix, w, eps, params),
        _ => approx_theorem1(lambda, region, prefix, w, eps, params),
    }
}

/// Inputs shared by all engines.
pub(crate) struct Problem<'a> {
    pub lambda: &'a CoefficientSet,
    pub prefix: &'a [Complex64],
    pub w: Complex64,
    pub eps: f64,
    pub params: &'a EngineParams,
}

impl<'a> Problem<'a> {
    pub fn new(
        lambda: &'a CoefficientSet,
        prefix: &'a PrefixConstraint,
        w: Complex64,
        eps: f64,
        params: &'a EngineParams,
    ) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::invalid("eps must be positive and finite"));
        }
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::invalid("target must be finite"));
        }
        if !(params.delta_cap > 0.0 && params.delta_cap <= 0.4) {
            return Err(Error::invalid("delta_cap must lie in (0, 2/5]"));
        }
        if let Some(e0) = params.epsilon0 {
            if !(e0 > 0.0 && e0 < 1.0) {
                return Err(Error::invalid("epsilon0 must lie in (0, 1)"));
            }
        }
        if let Some(i) = prefix.values.iter().position(|&v| !lambda.contains(v)) {
            return Err(Error::invalid(format!("prefix value at index {i} is not in the coefficient set")));
        }
        Ok(Problem { lambda, prefix: &prefix.values, w, eps, params })
    }

    pub fn free_start(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn prefix_at(&self, tau: Complex64) -> Complex64 {
        let terms: Vec<(u64, Complex64)> = self.prefix.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect();
        eval_unchecked(&terms, tau)
    }
}

/// Λ mapped affinely onto a set containing 0 and 1.
pub(crate) struct Normalized {
    pub lambda: CoefficientSet,
    pub transform: AffineTransform,
    prefix: Vec<(u64, Complex64)>,
}

impl Normalized {
    /// Anchors: `a = 0` and `b` of largest modulus when 0 ∈ Λ, otherwise the
    /// pair of largest distance.
    pub fn new(p: &Problem) -> Result<Self> {
        let els = p.lambda.elements();
        let (a, b) = if p.lambda.contains_zero() {
            let zero = els[p.lambda.position(ZERO).unwrap()];
            let b = els.iter().copied().filter(|&e| e != zero).reduce(|x, y| if y.norm() > x.norm() { y } else { x });
            (zero, b.unwrap())
        } else {
            let mut best = (els[0], els[1]);
            for (i, &x) in els.iter().enumerate() {
                for &y in &els[i + 1..] {
                    if (y - x).norm() > (best.1 - best.0).norm() {
                        best = (x, y);
                    }
                }
            }
            best
        };
        let (lambda, transform) = normalize_affine(p.lambda, a, b)?;
        let prefix = p.prefix.iter().enumerate().map(|(i, &v)| (i as u64, transform.forward(v))).collect();
        Ok(Normalized { lambda, transform, prefix })
    }

    pub fn scale(&self) -> f64 {
        self.transform.scale.norm()
    }

    /// What the free coefficients must contribute at τ, in normalized units.
    pub fn target_at(&self, w: Complex64, tau: Complex64) -> Complex64 {
        let t = &self.transform;
        (w - t.shift / (ONE - tau)) / t.scale - eval_unchecked(&self.prefix, tau)
    }

    /// The original element corresponding to a normalized one.
    pub fn original(&self, original: &CoefficientSet, v: Complex64) -> Complex64 {
        let z = self.transform.backward(v);
        original.elements().iter().copied().min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm())).unwrap()
    }
}

/// How unlisted free indices are filled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Fill {
    /// Leave gaps; they read as 0, which is in Λ.
    Zero,
    /// List every index explicitly, using this element for the gaps.
    Dense(Complex64),
}

impl Fill {
    pub fn for_element(lambda: &CoefficientSet, filler: Complex64) -> Fill {
        if filler == ZERO && lambda.contains_zero() {
            Fill::Zero
        } else {
            Fill::Dense(filler)
        }
    }
}

/// Turns the prefix plus the chosen free terms into a certificate whose
/// fixed part reaches the tail cutoff `tail_bound < ε/10`.
pub(crate) fn assemble(p: &Problem, tau: Complex64, free: &[(u64, Complex64)], fill: Fill) -> Result<Certificate> {
    let r = tau.norm();
    let n0 = p.free_start();
    let sup = p.lambda.sup_modulus();
    let cutoff = tail_cutoff(sup, r, p.eps / 10.0)?;
    let last_free = free.last().map(|t| t.0);
    let last = [cutoff.saturating_sub(1), last_free.unwrap_or(0), n0.saturating_sub(1)].into_iter().max().unwrap();
    let mut terms: Vec<(u64, Complex64)> = p.prefix.iter().enumerate().map(|(i, &v)| (i as u64, v)).collect();
    match fill {
        Fill::Zero => {
            terms.extend(free.iter().copied().filter(|t| t.1 != ZERO));
            if terms.last().is_none_or(|t| t.0 < last) {
                terms.push((last, ZERO));
            }
        }
        Fill::Dense(filler) => {
            if last + 1 > p.params.max_terms {
                return Err(Error::CertificateTooLarge { needed: last + 1, limit: p.params.max_terms });
            }
            let mut it = free.iter().peekable();
            for n in n0..=last {
                match it.peek() {
                    Some(&&(m, v)) if m == n => {
                        terms.push((n, v));
                        it.next();
                    }
                    _ => terms.push((n, filler)),
                }
            }
        }
    }
    let assignment = SparseAssignment::new(terms)?;
    let value = eval_unchecked(assignment.terms(), tau);
    let tail = tail_bound(sup, r, assignment.end())?;
    Ok(Certificate {
        tau,
        target: p.w,
        epsilon: p.eps,
        achieved_error: (value - p.w).norm(),
        tail_bound: tail,
        assignment,
    })
}

/// `Σ zⁿ` over the given exponents.
pub(crate) fn power_sum(exponents: &[u64], z: Complex64) -> Complex64 {
    let terms: Vec<(u64, Complex64)> = exponents.iter().map(|&n| (n, ONE)).collect();
    eval_unchecked(&terms, z)
}

pub(crate) fn exhausted(attempts: u32) -> Error {
    Error::VerificationFailed(format!("no valid certificate after {attempts} attempts"))
}
