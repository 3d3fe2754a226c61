//! Theorem 1: ζ ≠ ±1. The free coefficients take the two normalized values
//! 0 and 1, so the free part is a sum of distinct powers of τ.

use num_complex::Complex64;

use super::tau::{select_tau, ModulusTarget};
use super::{assemble, exhausted, power_sum, EngineOutput, EngineParams, EngineTrace, Fill, Normalized, PrefixConstraint, Problem};
use crate::angle::{ExcludedRoot, ZetaKind};
use crate::coeffs::CoefficientSet;
use crate::complex::{cpow, ONE, ZERO};
use crate::error::{Error, Result};
use crate::nets::{one_net_sum, unimodular_sum_approx};
use crate::region::RegionSpec;

pub fn approx_theorem1(
    lambda: &CoefficientSet,
    region: &RegionSpec,
    prefix: &PrefixConstraint,
    w: Complex64,
    eps: f64,
    params: &EngineParams,
) -> Result<EngineOutput> {
    let zeta = region.accumulation_point;
    if zeta.is_plus_minus_one() {
        return Err(Error::not_applicable("zeta-is-real"));
    }
    let p = Problem::new(lambda, prefix, w, eps, params)?;
    let norm = Normalized::new(&p)?;
    match zeta.kind() {
        ZetaKind::Excluded(root) => lattice_branch(&p, &norm, region, root),
        _ => generic_branch(&p, &norm, region),
    }
}

fn sum_of(exps: &[u64]) -> f64 {
    exps.iter().map(|&n| n as f64).sum::<f64>().max(1.0)
}

fn generic_branch(p: &Problem, norm: &Normalized, region: &RegionSpec) -> Result<EngineOutput> {
    let zeta = region.accumulation_point;
    let s = norm.scale();
    let one = norm.original(p.lambda, ONE);
    let fill = Fill::for_element(p.lambda, norm.original(p.lambda, ZERO));
    let mut trace = EngineTrace::new(1, "unimodular", norm.transform);
    let mut delta = p.params.delta_cap;
    for attempt in 1..=p.params.max_attempts {
        let tau = select_tau(region, delta, ModulusTarget::Free)?.tau;
        let target = norm.target_at(p.w, tau);
        let sum = unimodular_sum_approx(target, zeta, p.free_start(), 0.25 * p.eps / s, p.params.horizon_cap)?;
        let free: Vec<(u64, Complex64)> = sum.exponents().iter().map(|&n| (n, one)).collect();
        let cert = assemble(p, tau, &free, fill)?;
        if cert.margin() > 0.0 {
            trace.delta = delta;
            trace.attempts = attempt;
            return Ok(EngineOutput { certificate: cert, trace });
        }
        // |τⁿ − ζⁿ| ≤ n|τ − ζ|: shrink δ until the move from ζ to τ fits the slack.
        let at_zeta = s * (sum.value() - target).norm();
        let slack = (p.eps - at_zeta - cert.tail_bound).max(0.05 * p.eps);
        let needed = slack / (2.0 * s * sum_of(sum.exponents()));
        delta = (0.5 * delta).min(needed);
    }
    Err(exhausted(p.params.max_attempts))
}

/// ζ ∈ {±i, ±ω, ±ω²}: the powers of ζ form a lattice, so approximate
/// `T/τ^M` to within 1 by a 1-net sum and scale back by `τ^M`, where
/// `ε/5 < |τ^M| < ε/3`. The finite 1-net `W` is the unit square grid; the
/// grid points around `T/τ^M` are tried and the best is kept.
fn lattice_branch(p: &Problem, norm: &Normalized, region: &RegionSpec, root: ExcludedRoot) -> Result<EngineOutput> {
    let zeta = root.turns();
    let zeta_unit = root.value();
    let s = norm.scale();
    let eps_n = p.eps / s;
    let one = norm.original(p.lambda, ONE);
    let fill = Fill::for_element(p.lambda, norm.original(p.lambda, ZERO));
    let mut trace = EngineTrace::new(1, "lattice", norm.transform);
    trace.epsilon0 = Some(eps_n);
    let mut delta = p.params.delta_cap;
    for attempt in 1..=p.params.max_attempts {
        let choice = select_tau(region, delta, ModulusTarget::Interval { lo: eps_n / 5.0, hi: eps_n / 3.0 })?;
        let (tau, m) = (choice.tau, choice.power.expect("interval target yields a power"));
        let xi = cpow(tau, m);
        let target = norm.target_at(p.w, tau);
        let x = target / xi;
        let mut best: Option<(f64, Vec<u64>)> = None;
        for re in [x.re.floor(), x.re.ceil()] {
            for im in [x.im.floor(), x.im.ceil()] {
                let net = one_net_sum(Complex64::new(re, im), zeta, p.free_start())?;
                let err = (xi * power_sum(net.exponents(), tau) - target).norm();
                if best.as_ref().is_none_or(|b| err < b.0) {
                    best = Some((err, net.exponents().to_vec()));
                }
            }
        }
        let exps = best.unwrap().1;
        let free: Vec<(u64, Complex64)> = exps.iter().map(|&n| (n + m, one)).collect();
        let cert = assemble(p, tau, &free, fill)?;
        if cert.margin() > 0.0 {
            trace.delta = delta;
            trace.attempts = attempt;
            trace.power = Some(m);
            return Ok(EngineOutput { certificate: cert, trace });
        }
        let at_zeta = s * (xi * power_sum(&exps, zeta_unit) - target).norm();
        let slack = (p.eps - at_zeta - cert.tail_bound).max(0.05 * p.eps);
        let needed = slack / (2.0 * s * xi.norm() * sum_of(&exps));
        delta = (0.5 * delta).min(needed);
    }
    Err(exhausted(p.params.max_attempts))
}
