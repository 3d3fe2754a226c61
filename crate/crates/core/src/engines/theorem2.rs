//! Theorem 2: ζ = −1 and Λ not on a line. Near −1, `τⁿ ≈ (−1)ⁿ`, so even
//! exponents contribute `+1` and odd ones `−1`; with normalized elements 1
//! and a non-real λ this reaches every lattice point `p + qλ`.

use num_complex::Complex64;

use super::tau::{select_tau, ModulusTarget};
use super::{assemble, exhausted, EngineOutput, EngineParams, EngineTrace, Fill, Normalized, PrefixConstraint, Problem};
use crate::angle::ZetaKind;
use crate::coeffs::CoefficientSet;
use crate::complex::{cpow, ONE, ZERO};
use crate::error::{Error, Result};
use crate::geometry::classify_lambda;
use crate::region::RegionSpec;

/// The lattice `ℤ + ℤλ` with a Gauss-reduced basis.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Lattice {
    /// Reduced basis vectors with their `(p, q)` coordinates over `(1, λ)`.
    u: (Complex64, i64, i64),
    v: (Complex64, i64, i64),
}

impl Lattice {
    pub fn new(lambda: Complex64) -> Self {
        let mut u = (ONE, 1i64, 0i64);
        let mut v = (lambda, 0i64, 1i64);
        loop {
            if v.0.norm_sqr() < u.0.norm_sqr() {
                std::mem::swap(&mut u, &mut v);
            }
            let mu = ((v.0 * u.0.conj()).re / u.0.norm_sqr()).round();
            if mu == 0.0 {
                break;
            }
            let k = mu as i64;
            v = (v.0 - u.0 * mu, v.1 - k * u.1, v.2 - k * u.2);
            if v.0.norm_sqr() >= u.0.norm_sqr() {
                break;
            }
        }
        Lattice { u, v }
    }

    /// Diameter of the reduced fundamental parallelogram.
    pub fn cell_diameter(&self) -> f64 {
        (self.u.0 + self.v.0).norm().max((self.u.0 - self.v.0).norm())
    }

    /// Nearest lattice point `(p, q)` to `x`.
    pub fn nearest(&self, x: Complex64) -> (i64, i64) {
        let (u, v) = (self.u.0, self.v.0);
        let det = u.re * v.im - u.im * v.re;
        let a = (x.re * v.im - x.im * v.re) / det;
        let b = (u.re * x.im - u.im * x.re) / det;
        let (a0, b0) = (a.round() as i64, b.round() as i64);
        let mut best = (f64::INFINITY, 0, 0);
        for da in -1..=1 {
            for db in -1..=1 {
                let (i, j) = (a0 + da, b0 + db);
                let z = u * i as f64 + v * j as f64;
                let d = (z - x).norm();
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        let (_, i, j) = best;
        (i * self.u.1 + j * self.v.1, i * self.u.2 + j * self.v.2)
    }
}

/// `|p|` exponents of parity `p < 0` followed by `|q|` of parity `q < 0`,
/// all distinct, the smallest available from `start` upward.
fn parity_exponents(p: i64, q: i64, start: u64) -> (Vec<u64>, Vec<u64>) {
    let mut next = [start + (start % 2), start + 1 - (start % 2)];
    let mut take = |count: i64| -> Vec<u64> {
        let slot = usize::from(count < 0);
        (0..count.unsigned_abs())
            .map(|_| {
                let n = next[slot];
                next[slot] += 2;
                n
            })
            .collect()
    };
    let ps = take(p);
    let qs = take(q);
    (ps, qs)
}

pub fn approx_theorem2(
    lambda: &CoefficientSet,
    region: &RegionSpec,
    prefix: &PrefixConstraint,
    w: Complex64,
    eps: f64,
    params: &EngineParams,
) -> Result<EngineOutput> {
    if region.accumulation_point.kind() != ZetaKind::MinusOne {
        return Err(Error::not_applicable("zeta-not-minus-one"));
    }
    if classify_lambda(lambda).is_line() {
        return Err(Error::not_applicable("line-contained"));
    }
    let p = Problem::new(lambda, prefix, w, eps, params)?;
    let norm = Normalized::new(&p)?;
    let lam_n = norm
        .lambda
        .elements()
        .iter()
        .copied()
        .reduce(|a, b| if b.im.abs() > a.im.abs() { b } else { a })
        .unwrap();
    let lattice = Lattice::new(lam_n);
    let s = norm.scale();
    let eps_n = p.eps / s;
    let mut eps0 = params.epsilon0.unwrap_or((0.4 * eps_n / lattice.cell_diameter()).min(0.5));
    let one = norm.original(p.lambda, ONE);
    let lam = norm.original(p.lambda, lam_n);
    let fill = Fill::for_element(p.lambda, norm.original(p.lambda, ZERO));
    let mut trace = EngineTrace::new(2, "parity-lattice", norm.transform);

    let mut delta = params.delta_cap;
    for attempt in 1..=params.max_attempts {
        let choice = select_tau(region, delta, ModulusTarget::Exact(eps0))?;
        let (tau, m) = (choice.tau, choice.power.expect("exact target yields a power"));
        let xi = cpow(tau, m);
        let target = norm.target_at(p.w, tau);
        let (pp, qq) = lattice.nearest(target / xi);
        let (ps, qs) = parity_exponents(pp, qq, p.free_start());
        let mut free: Vec<(u64, Complex64)> =
            ps.iter().map(|&n| (n + m, one)).chain(qs.iter().map(|&n| (n + m, lam))).collect();
        free.sort_by_key(|t| t.0);
        let cert = assemble(&p, tau, &free, fill)?;
        if cert.margin() > 0.0 {
            trace.epsilon0 = Some(eps0);
            trace.power = Some(m);
            trace.delta = delta;
            trace.attempts = attempt;
            return Ok(EngineOutput { certificate: cert, trace });
        }
        let rounding = s * (xi * (pp as f64 + lam_n * qq as f64) - target).norm();
        if rounding + cert.tail_bound > 0.6 * p.eps && params.epsilon0.is_none() {
            eps0 *= 0.5;
            continue;
        }
        let weight: f64 = ps.iter().map(|&n| n as f64).sum::<f64>() + lam_n.norm() * qs.iter().map(|&n| n as f64).sum::<f64>();
        let slack = (p.eps - rounding - cert.tail_bound).max(0.05 * p.eps);
        let needed = slack / (2.0 * s * eps0 * weight.max(1.0));
        delta = (0.5 * delta).min(needed);
    }
    Err(exhausted(params.max_attempts))
}
