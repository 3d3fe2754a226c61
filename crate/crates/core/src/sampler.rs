//! Random images `f(z)` of truncated series with uniformly drawn
//! coefficients, and how well they cover a target disk.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSet;
use crate::complex::{pair, ZERO};
use crate::counterexamples::trial_rng;
use crate::error::{Error, Result};
use crate::region::RegionSpec;
use crate::series::tail_bound;

pub const EPS_LEVELS: [f64; 3] = [1.0, 0.3, 0.1];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(with = "pair")]
    pub center: Complex64,
    pub radius: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, radius: f64, resolution: usize) -> Result<Self> {
        if !(radius > 0.0) || resolution == 0 {
            return Err(Error::invalid("grid needs a positive radius and resolution"));
        }
        Ok(GridSpec { center, radius, resolution })
    }

    fn step(&self) -> f64 {
        2.0 * self.radius / self.resolution as f64
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Complex64 {
        let s = self.step();
        self.center + Complex64::new(-self.radius + (i as f64 + 0.5) * s, -self.radius + (j as f64 + 0.5) * s)
    }

    pub fn in_disk(&self, i: usize, j: usize) -> bool {
        (self.cell_center(i, j) - self.center).norm() <= self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageSample {
    #[serde(with = "pair")]
    pub z: Complex64,
    #[serde(with = "pair")]
    pub f: Complex64,
    /// Bound on everything beyond the sampled prefix at this `z`.
    pub tail: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageCloud {
    pub samples: Vec<ImageSample>,
    pub grid: GridSpec,
    pub eps_levels: Vec<f64>,
    /// `hits[level][i * resolution + j]`: some sample satisfies
    /// `|f − cell| + tail < eps`.
    pub hits: Vec<Vec<bool>>,
}

impl ImageCloud {
    pub fn hit(&self, level: usize, i: usize, j: usize) -> bool {
        self.hits[level][i * self.grid.resolution + j]
    }

    /// Hit fraction among the cells whose centers lie in the grid disk.
    pub fn coverage(&self, level: usize) -> f64 {
        let n = self.grid.resolution;
        let (mut inside, mut hit) = (0usize, 0usize);
        for i in 0..n {
            for j in 0..n {
                if self.grid.in_disk(i, j) {
                    inside += 1;
                    hit += usize::from(self.hit(level, i, j));
                }
            }
        }
        if inside == 0 {
            0.0
        } else {
            hit as f64 / inside as f64
        }
    }

    pub fn summary(&self) -> CoverageSummary {
        CoverageSummary {
            trials: self.samples.len() as u64,
            eps_levels: self.eps_levels.clone(),
            coverage: (0..self.eps_levels.len()).map(|l| self.coverage(l)).collect(),
        }
    }

    /// `z_re,z_im,f_re,f_im,tail` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::invalid(format!("csv output failed: {e}"));
        w.write_record(["z_re", "z_im", "f_re", "f_im", "tail"]).map_err(io)?;
        for s in &self.samples {
            w.serialize((s.z.re, s.z.im, s.f.re, s.f.im, s.tail)).map_err(io)?;
        }
        w.flush().map_err(|e| Error::invalid(format!("csv output failed: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageSummary {
    pub trials: u64,
    pub eps_levels: Vec<f64>,
    pub coverage: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub prefix_len: u64,
    pub trials: u64,
    pub seed: u64,
}

/// Draws `trials` uniform coefficient prefixes and region points. Trial `t`
/// uses its own stream, so a run with more trials extends a run with fewer.
pub fn sample_image(lambda: &CoefficientSet, region: &RegionSpec, grid: GridSpec, cfg: SampleConfig) -> Result<ImageCloud> {
    let els = lambda.elements();
    let sup = lambda.sup_modulus();
    let samples: Vec<ImageSample> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let z = region.sample(&mut rng).ok_or(Error::RegionTooThin)?;
            let coeffs: Vec<Complex64> = (0..cfg.prefix_len).map(|_| els[rng.random_range(0..els.len())]).collect();
            let f = coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
            Ok(ImageSample { z, f, tail: tail_bound(sup, z.norm(), cfg.prefix_len)? })
        })
        .collect::<Result<_>>()?;

    let n = grid.resolution;
    let step = grid.step();
    let hits = EPS_LEVELS
        .par_iter()
        .map(|&eps| {
            let mut h = vec![false; n * n];
            for s in &samples {
                let reach = eps - s.tail;
                if reach <= 0.0 {
                    continue;
                }
                let lo = grid.center - Complex64::new(grid.radius, grid.radius);
                let range = |x: f64| {
                    let a = ((x - reach) / step - 0.5).ceil().max(0.0) as usize;
                    let b = ((x + reach) / step - 0.5).floor();
                    (a, if b < 0.0 { None } else { Some((b as usize).min(n - 1)) })
                };
                let (i0, i1) = range(s.f.re - lo.re);
                let (j0, j1) = range(s.f.im - lo.im);
                let (Some(i1), Some(j1)) = (i1, j1) else { continue };
                for i in i0..=i1 {
                    for j in j0..=j1 {
                        if (s.f - grid.cell_center(i, j)).norm() < reach {
                            h[i * n + j] = true;
                        }
                    }
                }
            }
            h
        })
        .collect();
    Ok(ImageCloud { samples, grid, eps_levels: EPS_LEVELS.to_vec(), hits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Turns;

    #[test]
    fn no_trials() {
        let lambda = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
        let region = RegionSpec::disk_toward(Turns::float(0.1414).unwrap(), 0.95, 0.1).unwrap();
        let grid = GridSpec::new(ZERO, 2.0, 50).unwrap();
        let cloud = sample_image(&lambda, &region, grid, SampleConfig { prefix_len: 64, trials: 0, seed: 1 }).unwrap();
        assert!(cloud.samples.is_empty());
        assert_eq!(cloud.summary().coverage, vec![0.0; 3]);
    }

    #[test]
    fn reproducible_and_monotone() {
        let lambda = CoefficientSet::from_reals(&[0.0, 1.0]).unwrap();
        let region = RegionSpec::disk_toward(Turns::float(0.1414).unwrap(), 0.7, 0.3).unwrap();
        let grid = GridSpec::new(ZERO, 2.0, 40).unwrap();
        let cfg = SampleConfig { prefix_len: 200, trials: 2000, seed: 9 };
        let a = sample_image(&lambda, &region, grid, cfg).unwrap();
        let b = sample_image(&lambda, &region, grid, cfg).unwrap();
        assert_eq!(a, b);
        let c = a.summary().coverage;
        assert!(c[0] >= c[1] && c[1] >= c[2]);
        let fewer = sample_image(&lambda, &region, grid, SampleConfig { trials: 500, ..cfg }).unwrap();
        assert_eq!(&a.samples[..500], &fewer.samples[..]);
        for l in 0..3 {
            assert!(a.coverage(l) >= fewer.coverage(l));
        }
    }
}
