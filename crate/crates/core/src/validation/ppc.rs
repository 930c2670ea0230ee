use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::ShockDataset;
use crate::error::{Error, Result};
use crate::regression::fit::eval_poly;
use crate::regression::posterior::{draw_joint, predictive_distribution, PosteriorNIG};
use crate::stats::rng::{RngState, Stream};
use crate::stats::sampling::std_normal;

pub const DEFAULT_REPLICATES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PPCRow {
    pub rep: usize,
    pub up: f64,
    pub actual: f64,
    pub simulated: f64,
}

/// Actual measurements paired with replicated datasets from the posterior
/// predictive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PPCResult {
    pub rng: RngState,
    pub replicates: usize,
    pub rows: Vec<PPCRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicateStats {
    pub rep: usize,
    /// Pearson correlation of actual against simulated.
    pub correlation: f64,
    /// Mean of `simulated − actual`.
    pub mean_difference: f64,
}

impl PPCResult {
    pub fn replicate(&self, rep: usize) -> impl Iterator<Item = &PPCRow> {
        self.rows.iter().filter(move |r| r.rep == rep)
    }

    pub fn replicate_stats(&self) -> Vec<ReplicateStats> {
        (0..self.replicates)
            .map(|rep| {
                let (a, s): (Vec<f64>, Vec<f64>) = self.replicate(rep).map(|r| (r.actual, r.simulated)).unzip();
                let diff = s.iter().zip(&a).map(|(x, y)| x - y).sum::<f64>() / a.len() as f64;
                ReplicateStats {
                    rep,
                    correlation: pearson(&a, &s),
                    mean_difference: diff,
                }
            })
            .collect()
    }
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

/// `ỹᵢ = xᵢᵀβ + N(0, σ²)` at each particle velocity.
pub fn simulate_replicate(beta: &[f64], sigma2: f64, up: &[f64], st: &mut Stream) -> Vec<f64> {
    let sd = sigma2.sqrt();
    up.iter()
        .map(|&x| {
            let z = std_normal(st);
            eval_poly(beta, x) + sd * z
        })
        .collect()
}

/// For each replicate draws `(β, σ²)` jointly and simulates a full dataset
/// at the observed particle velocities.
pub fn posterior_predictive_check(post: &PosteriorNIG, ds: &ShockDataset, replicates: usize, rng: &RngState) -> Result<PPCResult> {
    if replicates < 1 {
        return Err(Error::Config("replicate count must be at least 1".into()));
    }
    let chol = post.unit_scale.cholesky()?;
    let (up, us) = (ds.up(), ds.us());
    let rows = (0..replicates)
        .into_par_iter()
        .flat_map_iter(|rep| {
            let mut st = rng.child(rep as u64).stream();
            let (beta, sigma2) = draw_joint(post, &chol, &mut st);
            let sim = simulate_replicate(&beta, sigma2, &up, &mut st);
            (0..up.len())
                .map(|i| PPCRow {
                    rep,
                    up: up[i],
                    actual: us[i],
                    simulated: sim[i],
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(PPCResult {
        rng: *rng,
        replicates,
        rows,
    })
}

/// Fraction of future measurements, drawn from the posterior predictive at
/// each `up`, that land inside the pointwise prediction interval.
pub fn prediction_band_coverage(post: &PosteriorNIG, up: &[f64], level: f64, replicates: usize, rng: &RngState) -> Result<f64> {
    if up.is_empty() || replicates < 1 {
        return Err(Error::EmptyInput("coverage needs a grid and at least one replicate"));
    }
    let bounds: Vec<(f64, f64)> = up
        .iter()
        .map(|&x| predictive_distribution(post, x).interval(level))
        .collect::<Result<_>>()?;
    let chol = post.unit_scale.cholesky()?;
    let hits: usize = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let mut st = rng.child(rep as u64).stream();
            let (beta, sigma2) = draw_joint(post, &chol, &mut st);
            let sim = simulate_replicate(&beta, sigma2, up, &mut st);
            sim.iter().zip(&bounds).filter(|(y, (lo, hi))| lo <= *y && *y <= hi).count()
        })
        .sum();
    Ok(hits as f64 / (replicates * up.len()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_reproduces_fitted_values() {
        let up = [0.0, 1.0, 2.5];
        let beta = [3.9, 1.5];
        let mut st = RngState::new(0).stream();
        let sim = simulate_replicate(&beta, 0.0, &up, &mut st);
        for (s, x) in sim.iter().zip(up) {
            assert_eq!(*s, eval_poly(&beta, x));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let up = [0.1, 0.5, 0.9, 1.4, 2.0, 2.6];
        let us: Vec<f64> = up.iter().enumerate().map(|(i, x)| 4.0 + 1.4 * x + 0.02 * (i as f64 - 2.5)).collect();
        let ds = ShockDataset::from_velocities("d", &up, &us).unwrap();
        let post = crate::regression::posterior::posterior_from_data(&ds, 1).unwrap();
        let a = posterior_predictive_check(&post, &ds, 5, &RngState::new(1)).unwrap();
        let b = posterior_predictive_check(&post, &ds, 5, &RngState::new(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 30);
        assert_eq!(a.replicate_stats().len(), 5);
    }
}
