use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::fit::fit_xy;
use crate::regression::posterior::{credible_interval, credible_region_ellipse, posterior_noninformative};
use crate::stats::rng::RngState;

use super::ppc::simulate_replicate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    pub level: f64,
    pub replicates: usize,
    /// Fraction of intervals containing the true coefficient.
    pub per_coefficient: Vec<f64>,
    /// Fraction of joint regions containing the truth (straight line only).
    pub region: Option<f64>,
}

/// Simulates datasets from `us = xᵀβ + N(0, σ²)` at the given design and
/// reports how often the flat-prior credible sets contain the truth.
pub fn coverage_experiment(
    true_beta: &[f64],
    true_sigma2: f64,
    up: &[f64],
    level: f64,
    replicates: usize,
    rng: &RngState,
) -> Result<CoverageResult> {
    if true_beta.len() < 2 {
        return Err(Error::Domain("need an intercept and at least one slope".into()));
    }
    if !(true_sigma2 > 0.0) {
        return Err(Error::Domain("true noise variance must be positive".into()));
    }
    if replicates < 1 {
        return Err(Error::Config("replicate count must be at least 1".into()));
    }
    let degree = true_beta.len() - 1;
    let p = true_beta.len();
    let hits: Vec<(Vec<bool>, Option<bool>)> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let mut st = rng.child(rep as u64).stream();
            let y = simulate_replicate(true_beta, true_sigma2, up, &mut st);
            let post = posterior_noninformative(&fit_xy(up, &y, degree)?)?;
            let inside = (0..p)
                .map(|k| credible_interval(&post, k, level).map(|(lo, hi)| lo <= true_beta[k] && true_beta[k] <= hi))
                .collect::<Result<Vec<bool>>>()?;
            let region = if degree == 1 {
                Some(credible_region_ellipse(&post, level)?.contains([true_beta[0], true_beta[1]]))
            } else {
                None
            };
            Ok((inside, region))
        })
        .collect::<Result<_>>()?;
    let frac = |count: usize| count as f64 / replicates as f64;
    Ok(CoverageResult {
        level,
        replicates,
        per_coefficient: (0..p).map(|k| frac(hits.iter().filter(|h| h.0[k]).count())).collect(),
        region: (degree == 1).then(|| frac(hits.iter().filter(|h| h.1 == Some(true)).count())),
    })
}
