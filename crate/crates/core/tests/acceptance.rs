//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restricted_series::complex::cpow;
use restricted_series::counterexamples::{
    build_wedge, imag_bound_check, odd_indicator, real_bound_check, remark_closed_forms, shifted_odd_indicator,
    EvasionConfig, Side,
};
use restricted_series::engines::{
    approx_theorem1, approx_theorem2, approx_theorem3, verify_certificate, EngineOutput, EngineParams, PrefixConstraint,
};
use restricted_series::geometry::{descent_radius, verify_descent};
use restricted_series::nets::lattice::exact_sum;
use restricted_series::nets::{expand_nonneg, greedy_best_effort, LatticePoint};
use restricted_series::oracle::{best_prefix_error, Strategy};
use restricted_series::{eval_prefix, tail_bound, CoefficientSet, ExcludedRoot, RegionSpec, Turns};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verified(lambda: &CoefficientSet, region: &RegionSpec, out: &EngineOutput, label: &str) -> Result<f64, String> {
    let rep = verify_certificate(lambda, &out.certificate, region);
    ensure(rep.valid && rep.margin > 0.0, || format!("{label}: verify failed: {:?}", rep.issues))?;
    Ok(rep.margin)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let lambda = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
    let zeta = Turns::float(2f64.sqrt() / 10.0).unwrap();
    let region = RegionSpec::disk_toward(zeta, 0.95, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut min_margin = f64::INFINITY;
    for run in 0..100 {
        let w = in_disk(&mut rng, 10.0);
        let eps = if run % 2 == 0 { 0.1 } else { 0.01 };
        let prefix: Vec<Complex64> = (0..8).map(|_| c(f64::from(rng.random_range(0..2u8)), 0.0)).collect();
        let out = approx_theorem1(&lambda, &region, &PrefixConstraint::new(prefix), w, eps, &EngineParams::default())
            .map_err(|e| format!("run {run} (w = {w}, eps = {eps}): {e}"))?;
        min_margin = min_margin.min(verified(&lambda, &region, &out, &format!("run {run}"))?);
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("100 certificates verified, min margin {min_margin:.3e}, {t:.1?}"))
}

fn criterion2() -> Outcome {
    let lambda = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
    let eps = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, zeta) in [("i", Turns::rational(1, 4).unwrap()), ("omega", Turns::rational(1, 3).unwrap())] {
        let region = RegionSpec::disk_toward(zeta, 0.95, 0.1).unwrap();
        for run in 0..25 {
            let w = in_disk(&mut rng, 5.0);
            let out = approx_theorem1(&lambda, &region, &PrefixConstraint::empty(), w, eps, &EngineParams::default())
                .map_err(|e| format!("{name} run {run}: {e}"))?;
            verified(&lambda, &region, &out, &format!("{name} run {run}"))?;
            let m = out.trace.power.ok_or(format!("{name} run {run}: no power recorded"))?;
            let r = cpow(out.certificate.tau, m).norm();
            ensure(eps / 5.0 < r && r < eps / 3.0, || format!("{name} run {run}: |tau^M| = {r} outside (eps/5, eps/3)"))?;
        }
    }
    Ok("50 certificates verified, annulus holds for every recorded (tau, M)".into())
}

fn criterion3() -> Outcome {
    let lambda = CoefficientSet::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
    let region = RegionSpec::disk_toward(Turns::rational(1, 2).unwrap(), 0.95, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for run in 0..50 {
        let w = in_disk(&mut rng, 5.0);
        let out = approx_theorem2(&lambda, &region, &PrefixConstraint::empty(), w, 0.2, &EngineParams::default())
            .map_err(|e| format!("run {run}: {e}"))?;
        verified(&lambda, &region, &out, &format!("run {run}"))?;
        let (m, e0) = (out.trace.power.ok_or("no power")?, out.trace.epsilon0.ok_or("no epsilon0")?);
        let rel = (out.certificate.tau.norm().powf(m as f64) - e0).abs() / e0;
        ensure(rel <= 1e-9, || format!("run {run}: |tau|^M off by {rel:e} relative"))?;
        worst = worst.max(rel);
    }
    Ok(format!("50 certificates verified, worst |tau|^M relative deviation {worst:.1e}"))
}

fn criterion4() -> Outcome {
    let lambda = CoefficientSet::from_pairs(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]).unwrap();
    let region = RegionSpec::disk_toward(Turns::rational(0, 1).unwrap(), 0.95, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_ratio = 0.0f64;
    for run in 0..50 {
        let w = in_disk(&mut rng, 5.0);
        let out = approx_theorem3(&lambda, &region, &PrefixConstraint::empty(), w, 0.2, &EngineParams::default())
            .map_err(|e| format!("run {run}: {e}"))?;
        verified(&lambda, &region, &out, &format!("run {run}"))?;
        let r_star = out.trace.r_star.ok_or("no R*")?;
        let (start, m) = out.trace.reserved_block.ok_or("no reserved block")?;
        let tau = out.certificate.tau;
        let mut s = c(0.0, 0.0);
        let mut max = 0.0f64;
        for &(n, v) in out.certificate.assignment.terms() {
            if (start..start + m).contains(&n) {
                continue;
            }
            s += v * cpow(tau, n);
            max = max.max(s.norm());
        }
        ensure(max <= r_star + 1e-9, || format!("run {run}: partial sum {max} exceeds R* = {r_star}"))?;
        worst_ratio = worst_ratio.max(max / r_star);
    }
    Ok(format!("50 certificates verified, largest scheduled partial sum {worst_ratio:.3} R*"))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for zeta in [ExcludedRoot::I, ExcludedRoot::Omega] {
        for _ in 0..1000 {
            let p = LatticePoint::new(rng.random_range(-20..=20), rng.random_range(-20..=20), zeta);
            let sum = expand_nonneg(p, 0);
            let back = exact_sum(zeta, sum.exponents());
            ensure(back == p, || format!("{zeta:?}: {p:?} re-sums to {back:?}"))?;
        }
    }
    for zeta in ExcludedRoot::ALL {
        let s = exact_sum(zeta, &(1..=11).collect::<Vec<u64>>());
        ensure(s == LatticePoint::new(-1, 0, zeta), || format!("{zeta:?}: sum of zeta^1..zeta^11 is {s:?}"))?;
    }
    Ok("2000 expansions re-sum exactly; eleven-term identity exact for all six roots".into())
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let values = [c(0.0, 0.0), c(1.0, 0.0)];
    let mut worst = f64::NEG_INFINITY;
    for k in [2, 3, 5] {
        let wedge = build_wedge(k, Side::AtMinusOne).map_err(|e| e.to_string())?;
        let rep = imag_bound_check(&values, &wedge, &EvasionConfig { seed: 6, ..EvasionConfig::default() })
            .map_err(|e| e.to_string())?;
        ensure(rep.extreme <= 3.0 + 1e-9, || format!("k = {k}: max Im + tail = {}", rep.extreme))?;
        worst = worst.max(rep.extreme);
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!("max(Im prefix + tail) = {worst:.4} <= 3 over k = 2, 3, 5, {t:.1?}"))
}

fn criterion7() -> Outcome {
    let values = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
    let mut worst = f64::INFINITY;
    for k in [2, 3] {
        let wedge = build_wedge(k, Side::AtPlusOne).map_err(|e| e.to_string())?;
        let rep = real_bound_check(&values, &wedge, &EvasionConfig { seed: 7, ..EvasionConfig::default() })
            .map_err(|e| e.to_string())?;
        ensure(rep.extreme >= -3.0 - 1e-9, || format!("k = {k}: min Re - tail = {}", rep.extreme))?;
        worst = worst.min(rep.extreme);
    }
    Ok(format!("min(Re prefix - tail) = {worst:.4} >= -3 over k = 2, 3"))
}

fn criterion8() -> Outcome {
    let lambda = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
    let zeta = Turns::float(2f64.sqrt() / 10.0).unwrap();
    let region = RegionSpec::disk_toward(zeta, 0.95, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut gap = f64::INFINITY;
    for run in 0..20 {
        let tau = region.sample(&mut rng).ok_or("region sample failed")?;
        let w = in_disk(&mut rng, 2.0);
        let angle = Turns::float(tau.arg() / TAU).map_err(|e| e.to_string())?;
        let (exps, _) = greedy_best_effort(w, angle, tau.norm(), 0, 16);
        let engine = (exps.iter().map(|&e| cpow(tau, e)).sum::<Complex64>() - w).norm();
        let direct = best_prefix_error(&lambda, tau, w, 16, Strategy::Direct).map_err(|e| e.to_string())?;
        let mitm = best_prefix_error(&lambda, tau, w, 16, Strategy::MeetInMiddle).map_err(|e| e.to_string())?;
        ensure(engine >= direct.best_error - 1e-12, || {
            format!("run {run}: engine {engine} beats oracle {}", direct.best_error)
        })?;
        let d = (direct.best_error - mitm.best_error).abs();
        ensure(d <= 1e-12, || format!("run {run}: direct and meet-in-middle differ by {d:e}"))?;
        gap = gap.min(engine - direct.best_error);
    }
    Ok(format!("20 instances: engine >= oracle (smallest gap {gap:.2e}); both strategies agree"))
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let len = 200;
    let rounding = 1e-12;
    for i in 0..20 {
        let z = in_disk(&mut rng, 0.9);
        let (odd, shifted) = remark_closed_forms(z).map_err(|e| e.to_string())?;
        let f = eval_prefix(&odd_indicator(len), z).map_err(|e| e.to_string())?;
        let bound = tail_bound(1.0, z.norm(), len).map_err(|e| e.to_string())? + rounding;
        ensure((f - odd).norm() <= bound, || format!("point {i}: odd series off by {}", (f - odd).norm()))?;
        let g = eval_prefix(&shifted_odd_indicator(len), z).map_err(|e| e.to_string())?;
        let bound = tail_bound(0.5, z.norm(), len).map_err(|e| e.to_string())? + rounding;
        ensure((g - shifted).norm() <= bound, || format!("point {i}: shifted series off by {}", (g - shifted).norm()))?;
    }
    Ok("20 points: both closed forms matched within tail bounds".into())
}

fn criterion10() -> Outcome {
    let lambda = CoefficientSet::from_pairs(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]).unwrap();
    let r = descent_radius(&lambda).map_err(|e| e.to_string())?;
    verify_descent(&lambda, r).map_err(|e| e.to_string())?;
    ensure(r <= 1.02 * FRAC_1_SQRT_2, || format!("R = {r} exceeds 1.02/sqrt 2"))?;
    Ok(format!("R = {r:.5} passes the direction check, <= {:.5}", 1.02 * FRAC_1_SQRT_2))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("generic-branch certificates", criterion1),
        ("root-of-unity certificates", criterion2),
        ("zeta = -1 engine", criterion3),
        ("zeta = 1 engine", criterion4),
        ("exact lattice expansion", criterion5),
        ("evasion bound at -1", criterion6),
        ("evasion bound at +1", criterion7),
        ("oracle dominance", criterion8),
        ("odd-indicator closed forms", criterion9),
        ("descent radius", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
