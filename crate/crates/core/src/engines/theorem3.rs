//! Theorem 3: ζ = 1 and Λ spanning. A reserved block of `m` consecutive
//! indices carries a combination `Σ k_j Δ_j` (`Σ k_j = m`) of the
//! Δ-quadruple, scaled by `τ^M ≈ ε₀`; every other index is filled by the
//! bounded-partial-sum scheduler, whose total `w₁` stays within `R*`.

use num_complex::Complex64;

use super::tau::{select_tau, ModulusTarget};
use super::{assemble, exhausted, EngineOutput, EngineParams, EngineTrace, Fill, PrefixConstraint, Problem};
use crate::affine::AffineTransform;
use crate::angle::ZetaKind;
use crate::coeffs::CoefficientSet;
use crate::complex::{cpow, ONE, ZERO};
use crate::error::{Error, Result};
use crate::geometry::{descent_radius, diameter, find_delta_quadruple, inradius_at_origin, schedule_with_radius};
use crate::region::RegionSpec;
use crate::series::tail_cutoff;

/// Counts `k_j ≥ 0` with `Σ k_j = m` minimizing `|Σ k_j Δ_j − target|`.
/// `k₀, k₁` are enumerated and `k₂` is the clamped projection onto `Δ₂ − Δ₃`.
pub(crate) fn best_counts(deltas: &[Complex64], m: u64, target: Complex64) -> [u64; 4] {
    let dir = deltas[2] - deltas[3];
    let mut best = (f64::INFINITY, [m, 0, 0, 0]);
    for k0 in 0..=m {
        for k1 in 0..=m - k0 {
            let rest = m - k0 - k1;
            let base = deltas[0] * k0 as f64 + deltas[1] * k1 as f64 + deltas[3] * rest as f64;
            let k2s: [u64; 2] = if dir.norm_sqr() == 0.0 {
                [0, 0]
            } else {
                let t = ((target - base) * dir.conj()).re / dir.norm_sqr();
                let t = t.clamp(0.0, rest as f64);
                [t.floor() as u64, t.ceil() as u64]
            };
            for k2 in k2s {
                let d = (base + dir * k2 as f64 - target).norm();
                if d < best.0 {
                    best = (d, [k0, k1, k2, rest - k2]);
                }
            }
        }
    }
    best.1
}

/// Spreads the counts over `m` block positions, each `j` at a steady rate.
pub(crate) fn interleave(counts: [u64; 4]) -> Vec<usize> {
    let m: u64 = counts.iter().sum();
    let mut used = [0u64; 4];
    (0..m)
        .map(|i| {
            let j = (0..4)
                .filter(|&j| used[j] < counts[j])
                .max_by(|&a, &b| {
                    let lag = |j: usize| (counts[j] * (i + 1)) as f64 / m as f64 - used[j] as f64;
                    lag(a).total_cmp(&lag(b)).then(b.cmp(&a))
                })
                .unwrap();
            used[j] += 1;
            j
        })
        .collect()
}

pub fn approx_theorem3(
    lambda: &CoefficientSet,
    region: &RegionSpec,
    prefix: &PrefixConstraint,
    w: Complex64,
    eps: f64,
    params: &EngineParams,
) -> Result<EngineOutput> {
    if region.accumulation_point.kind() != ZetaKind::One {
        return Err(Error::not_applicable("zeta-not-one"));
    }
    let quad = find_delta_quadruple(lambda)?;
    let p = Problem::new(lambda, prefix, w, eps, params)?;
    let radius = descent_radius(lambda)?;
    let sup = lambda.sup_modulus();
    let r_star = radius + sup;
    let r_in = inradius_at_origin(&quad.deltas);
    let poly_diam = diameter(&quad.deltas);
    let mut eps0 = params.epsilon0.unwrap_or((0.4 * eps / poly_diam).min(0.5));
    let fill = Fill::for_element(lambda, if lambda.contains_zero() { ZERO } else { lambda.min_modulus_element() });
    let n0 = p.free_start();
    let mut trace = EngineTrace::new(3, "reserved-block", AffineTransform::identity());
    trace.r_star = Some(r_star);

    // keep m·|1 − τ| small from the start
    let m_est = (p.w.norm() + p.prefix.iter().map(|v| v.norm()).sum::<f64>() + r_star) / (eps0 * r_in);
    let mut delta = params.delta_cap.min(0.05 / m_est);
    for attempt in 1..=params.max_attempts {
        let choice = select_tau(region, delta, ModulusTarget::Exact(eps0))?;
        let (tau, big_m) = (choice.tau, choice.power.expect("exact target yields a power"));
        let target = p.w - p.prefix_at(tau);

        // block n0+M .. n0+M+m−1, with |T| + R* < |c̄|·m·r
        let start = n0 + big_m;
        let mut m = ((target.norm() + r_star) / (eps0 * r_in)).ceil().max(1.0) as u64;
        let one_minus = 1.0 - tau.norm();
        let cbar = loop {
            if m as f64 * one_minus > 0.5 {
                break None;
            }
            let first = cpow(tau, start);
            let geo = if tau == ONE {
                Complex64::new(m as f64, 0.0)
            } else {
                (ONE - cpow(tau, m)) / (ONE - tau)
            };
            let cbar = first * geo / m as f64;
            if target.norm() + r_star < cbar.norm() * m as f64 * r_in {
                break Some(cbar);
            }
            m = m + m / 10 + 1;
        };
        // τ^i varies too much across a block this long: move τ closer to 1
        let Some(cbar) = cbar else {
            delta *= 0.5;
            continue;
        };
        let end = start + m;
        let last = (tail_cutoff(sup, tau.norm(), eps / 10.0)?.saturating_sub(1)).max(end);
        if last + 1 > params.max_terms {
            return Err(Error::CertificateTooLarge { needed: last + 1, limit: params.max_terms });
        }
        let indices: Vec<u64> = (n0..start).chain(end..=last).collect();
        let sched = schedule_with_radius(lambda, tau, &indices, radius)?;
        let want = (target - sched.sum) / cbar;
        let counts = best_counts(&quad.deltas, m, want);
        let order = interleave(counts);

        let mut free: Vec<(u64, Complex64)> = Vec::with_capacity((last + 1 - n0) as usize);
        free.extend(sched.assignment.terms().iter().copied().filter(|t| t.0 < start));
        free.extend(order.iter().enumerate().map(|(i, &j)| (start + i as u64, quad.deltas[j])));
        free.extend(sched.assignment.terms().iter().copied().filter(|t| t.0 >= end));
        let cert = assemble(&p, tau, &free, fill)?;
        if cert.margin() > 0.0 {
            trace.epsilon0 = Some(eps0);
            trace.power = Some(big_m);
            trace.reserved_block = Some((start, m));
            trace.max_partial_sum = Some(sched.max_partial);
            trace.delta = delta;
            trace.attempts = attempt;
            return Ok(EngineOutput { certificate: cert, trace });
        }
        let ideal: Complex64 = (0..4).map(|j| quad.deltas[j] * counts[j] as f64).sum::<Complex64>() * cbar;
        let rounding = (ideal - (target - sched.sum)).norm();
        if rounding + cert.tail_bound > 0.6 * eps && params.epsilon0.is_none() {
            eps0 *= 0.7;
            continue;
        }
        // the rest is the spread of τ^i across the block, linear in |1 − τ|
        let actual: Complex64 = order.iter().enumerate().map(|(i, &j)| quad.deltas[j] * cpow(tau, start + i as u64)).sum();
        let spread = (actual - ideal).norm();
        let slack = (eps - rounding - cert.tail_bound).max(0.05 * eps);
        delta = (0.5 * delta).min(delta * slack / (2.0 * spread.max(1e-300)));
    }
    Err(exhausted(params.max_attempts))
}
