//! Pairs bootstrap of the least-squares fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::ShockDataset;
use crate::error::{Error, Result};
use crate::regression::distributions::SampleBatch;
use crate::regression::fit::{eval_poly, fit_least_squares, fit_xy, FitResult};
use crate::regression::posterior::{posterior_noninformative, sample_beta, PosteriorNIG};
use crate::regression::summary::{parameter_names, parameter_units, ParameterSummary};
use crate::stats::quantile::{mean_sd, quantiles_in_place};
use crate::stats::rng::{RngState, Stream};
use crate::stats::sampling::std_normal;

pub const DEFAULT_RESAMPLES: usize = 100_000;
/// Largest tolerated fraction of rank-deficient resamples.
pub const MAX_REDRAW_FRACTION: f64 = 0.01;
const MAX_ATTEMPTS_PER_RESAMPLE: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapMode {
    /// Resample measurement pairs with replacement.
    Pairs,
    /// Simulate responses from the fitted Gaussian model at the observed up.
    Parametric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapEnsemble {
    /// One row of coefficients per resample.
    pub estimates: SampleBatch,
    pub rng: RngState,
    pub resamples: usize,
    pub degree: usize,
    pub redraws: usize,
    pub mode: BootstrapMode,
}

impl BootstrapEnsemble {
    pub fn seed(&self) -> u64 {
        self.rng.seed
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.estimates.column(k)
    }
}

/// `n` indices drawn uniformly from `0..n` with replacement.
pub fn resample_indices(rng: &RngState, n: usize) -> Vec<usize> {
    let mut st = rng.stream();
    draw_indices(&mut st, n)
}

fn draw_indices(st: &mut Stream, n: usize) -> Vec<usize> {
    (0..n).map(|_| st.index(n)).collect()
}

/// Resamples measurement pairs `resamples` times and refits each.
/// Rank-deficient resamples are redrawn from the same per-resample stream
/// and counted.
pub fn bootstrap_ensemble(ds: &ShockDataset, degree: usize, resamples: usize, rng: &RngState) -> Result<BootstrapEnsemble> {
    if resamples < 1 {
        return Err(Error::Config("resample count must be at least 1".into()));
    }
    fit_least_squares(ds, degree)?;
    let (up, us) = (ds.up(), ds.us());
    let n = up.len();
    let rows: Vec<Result<(Vec<f64>, usize)>> = (0..resamples)
        .into_par_iter()
        .map(|i| {
            let mut st = rng.child(i as u64).stream();
            let mut x = vec![0.0; n];
            let mut y = vec![0.0; n];
            for attempt in 0..MAX_ATTEMPTS_PER_RESAMPLE {
                for (j, idx) in draw_indices(&mut st, n).into_iter().enumerate() {
                    x[j] = up[idx];
                    y[j] = us[idx];
                }
                match fit_xy(&x, &y, degree) {
                    Ok(fit) => return Ok((fit.beta_hat, attempt)),
                    Err(Error::RankDeficient(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::ExcessiveRedraws {
                redraws: MAX_ATTEMPTS_PER_RESAMPLE,
                resamples: 1,
            })
        })
        .collect();
    collect_ensemble(rows, rng, resamples, degree, BootstrapMode::Pairs)
}

/// Simulates `ŷ + N(0, s²)` at the observed particle velocities and refits.
pub fn parametric_bootstrap_ensemble(
    ds: &ShockDataset,
    degree: usize,
    resamples: usize,
    rng: &RngState,
) -> Result<BootstrapEnsemble> {
    if resamples < 1 {
        return Err(Error::Config("resample count must be at least 1".into()));
    }
    let fit = fit_least_squares(ds, degree)?;
    let up = ds.up();
    let fitted: Vec<f64> = up.iter().map(|&x| fit.predict(x)).collect();
    let s = fit.s2.sqrt();
    let rows: Vec<Result<(Vec<f64>, usize)>> = (0..resamples)
        .into_par_iter()
        .map(|i| {
            let mut st = rng.child(i as u64).stream();
            let y: Vec<f64> = fitted.iter().map(|m| m + s * std_normal(&mut st)).collect();
            fit_xy(&up, &y, degree).map(|f| (f.beta_hat, 0))
        })
        .collect();
    collect_ensemble(rows, rng, resamples, degree, BootstrapMode::Parametric)
}

fn collect_ensemble(
    rows: Vec<Result<(Vec<f64>, usize)>>,
    rng: &RngState,
    resamples: usize,
    degree: usize,
    mode: BootstrapMode,
) -> Result<BootstrapEnsemble> {
    let mut data = Vec::with_capacity(resamples * (degree + 1));
    let mut redraws = 0;
    for row in rows {
        let (beta, r) = row?;
        data.extend(beta);
        redraws += r;
    }
    if redraws as f64 > MAX_REDRAW_FRACTION * resamples as f64 {
        return Err(Error::ExcessiveRedraws { redraws, resamples });
    }
    Ok(BootstrapEnsemble {
        estimates: SampleBatch { dim: degree + 1, data },
        rng: *rng,
        resamples,
        degree,
        redraws,
        mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSummary {
    pub mean: f64,
    pub sd: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Ensemble mean, sd (n − 1) and percentile interval per coefficient.
pub fn percentile_summary(ens: &BootstrapEnsemble, level: f64) -> Result<Vec<CoefficientSummary>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    let probs = [0.5 * (1.0 - level), 0.5 * (1.0 + level)];
    Ok((0..ens.estimates.dim)
        .into_par_iter()
        .map(|k| {
            let mut col = ens.column(k);
            let (mean, sd) = mean_sd(&col);
            let q = quantiles_in_place(&mut col, &probs);
            CoefficientSummary {
                mean,
                sd,
                lo: q[0],
                hi: q[1],
            }
        })
        .collect())
}

/// Table rows in the same layout as the posterior table.
pub fn bootstrap_table(material: &str, ens: &BootstrapEnsemble, level: f64) -> Result<Vec<ParameterSummary>> {
    let rows = percentile_summary(ens, level)?;
    Ok(parameter_names(ens.degree)
        .into_iter()
        .zip(rows)
        .enumerate()
        .map(|(k, (name, r))| ParameterSummary {
            material: material.to_string(),
            parameter: name,
            mean: r.mean,
            sd: r.sd,
            lo: r.lo,
            hi: r.hi,
            units: parameter_units(k),
        })
        .collect())
}

/// Sample skewness `m₃ / m₂^{3/2}` of coefficient `k`.
pub fn skewness(ens: &BootstrapEnsemble, k: usize) -> f64 {
    let col = ens.column(k);
    let n = col.len() as f64;
    let mean = col.iter().sum::<f64>() / n;
    let (m2, m3) = col.iter().fold((0.0, 0.0), |(a, b), v| {
        let d = v - mean;
        (a + d * d, b + d * d * d)
    });
    (m3 / n) / (m2 / n).powf(1.5)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapBands {
    pub level: f64,
    pub up: Vec<f64>,
    pub mean: Vec<f64>,
    pub conf_lo: Vec<f64>,
    pub conf_hi: Vec<f64>,
    pub pred_lo: Vec<f64>,
    pub pred_hi: Vec<f64>,
}

/// Pointwise percentile bands of the ensemble's `us(up)` curves. The
/// prediction band adds independent `N(0, s²)` noise with the full-data s²,
/// drawn from per-grid-point substreams of the ensemble's state.
pub fn bootstrap_bands(ds: &ShockDataset, ens: &BootstrapEnsemble, up_grid: &[f64], level: f64) -> Result<BootstrapBands> {
    if up_grid.is_empty() {
        return Err(Error::EmptyInput("band needs a non-empty particle-velocity grid"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    let s = fit_least_squares(ds, ens.degree)?.s2.sqrt();
    let probs = [0.5 * (1.0 - level), 0.5 * (1.0 + level)];
    let noise_root = ens.rng.substream("prediction-noise");
    let cols: Vec<[f64; 5]> = up_grid
        .par_iter()
        .enumerate()
        .map(|(j, &x)| {
            let mut curve: Vec<f64> = ens.estimates.rows().map(|b| eval_poly(b, x)).collect();
            let mean = curve.iter().sum::<f64>() / curve.len() as f64;
            let mut st = noise_root.child(j as u64).stream();
            let mut noisy: Vec<f64> = curve.iter().map(|c| c + s * std_normal(&mut st)).collect();
            let c = quantiles_in_place(&mut curve, &probs);
            let p = quantiles_in_place(&mut noisy, &probs);
            [mean, c[0], c[1], p[0], p[1]]
        })
        .collect();
    Ok(BootstrapBands {
        level,
        up: up_grid.to_vec(),
        mean: cols.iter().map(|c| c[0]).collect(),
        conf_lo: cols.iter().map(|c| c[1]).collect(),
        conf_hi: cols.iter().map(|c| c[2]).collect(),
        pred_lo: cols.iter().map(|c| c[3]).collect(),
        pred_hi: cols.iter().map(|c| c[4]).collect(),
    })
}

/// Bootstrap and posterior results for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityArm {
    pub n: usize,
    pub fit: FitResult,
    pub ensemble: BootstrapEnsemble,
    pub bootstrap: Vec<CoefficientSummary>,
    pub posterior: PosteriorNIG,
    pub posterior_draws: SampleBatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityResult {
    pub dropped_index: usize,
    pub dropped_up: f64,
    pub full: SensitivityArm,
    pub dropped: SensitivityArm,
}

/// Index of the unique largest particle velocity.
pub fn max_up_index(ds: &ShockDataset) -> Result<usize> {
    let up = ds.up();
    let max = up.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let hits: Vec<usize> = (0..up.len()).filter(|&i| up[i] == max).collect();
    if hits.len() != 1 {
        return Err(Error::TieBreak {
            up: max,
            count: hits.len(),
        });
    }
    Ok(hits[0])
}

fn sensitivity_arm(ds: &ShockDataset, degree: usize, resamples: usize, samples: usize, rng: &RngState) -> Result<SensitivityArm> {
    let fit = fit_least_squares(ds, degree)?;
    let ensemble = bootstrap_ensemble(ds, degree, resamples, &rng.substream("bootstrap"))?;
    let bootstrap = percentile_summary(&ensemble, 0.95)?;
    let posterior = posterior_noninformative(&fit)?;
    let posterior_draws = sample_beta(&posterior, samples, &rng.substream("posterior"))?;
    Ok(SensitivityArm {
        n: ds.len(),
        fit,
        ensemble,
        bootstrap,
        posterior,
        posterior_draws,
    })
}

/// Compares bootstrap and posterior results with and without the point of
/// largest particle velocity.
pub fn sensitivity_drop_max_up(
    ds: &ShockDataset,
    degree: usize,
    resamples: usize,
    samples: usize,
    rng: &RngState,
) -> Result<SensitivityResult> {
    if ds.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, have: ds.len() });
    }
    let idx = max_up_index(ds)?;
    let reduced = ds.without(idx)?;
    Ok(SensitivityResult {
        dropped_index: idx,
        dropped_up: ds.points()[idx].up,
        full: sensitivity_arm(ds, degree, resamples, samples, &rng.substream("full"))?,
        dropped: sensitivity_arm(&reduced, degree, resamples, samples, &rng.substream("dropped"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> ShockDataset {
        let up = [0.0, 0.3, 0.6, 0.8, 1.1, 1.5, 1.9, 2.2, 2.6, 3.0];
        let noise = [0.02, -0.03, 0.01, 0.04, -0.02, -0.01, 0.03, -0.04, 0.02, -0.01];
        let us: Vec<f64> = up.iter().zip(noise).map(|(x, e)| 3.9 + 1.5 * x + e).collect();
        ShockDataset::from_velocities("demo", &up, &us).unwrap()
    }

    #[test]
    fn single_point_resample() {
        assert_eq!(resample_indices(&RngState::new(3), 1), vec![0]);
        let idx = resample_indices(&RngState::new(3), 10);
        assert!(idx.iter().all(|&i| i < 10));
        assert_eq!(idx, resample_indices(&RngState::new(3), 10));
    }

    #[test]
    fn rows_are_fits_of_their_resamples() {
        let ds = demo();
        let rng = RngState::new(11);
        let ens = bootstrap_ensemble(&ds, 1, 50, &rng).unwrap();
        assert_eq!(ens.redraws, 0);
        for i in [0, 7, 49] {
            let idx = resample_indices(&rng.child(i as u64), ds.len());
            let sub = ds.select(&idx).unwrap();
            let fit = fit_least_squares(&sub, 1).unwrap();
            assert_eq!(ens.estimates.row(i), &fit.beta_hat[..]);
        }
    }

    #[test]
    fn redraws_are_counted() {
        // two distinct up values, one of them rare: some resamples see only one
        let mut up = vec![1.0; 7];
        up.push(2.0);
        let us: Vec<f64> = (0..8).map(|i| 3.0 + 0.1 * i as f64).collect();
        let ds = ShockDataset::from_velocities("tie", &up, &us).unwrap();
        let err = bootstrap_ensemble(&ds, 1, 400, &RngState::new(1)).unwrap_err();
        match err {
            Error::ExcessiveRedraws { redraws, resamples } => {
                assert_eq!(resamples, 400);
                assert!(redraws > 4);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let ds = demo();
        let rng = RngState::new(2);
        let a = bootstrap_ensemble(&ds, 1, 300, &rng).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        let b = pool.install(|| bootstrap_ensemble(&ds, 1, 300, &rng).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn identical_rows_collapse_summary() {
        let ens = BootstrapEnsemble {
            estimates: SampleBatch {
                dim: 2,
                data: [3.9, 1.5].repeat(200),
            },
            rng: RngState::new(0),
            resamples: 200,
            degree: 1,
            redraws: 0,
            mode: BootstrapMode::Pairs,
        };
        for (r, m) in percentile_summary(&ens, 0.95).unwrap().iter().zip([3.9, 1.5]) {
            assert_eq!((r.lo, r.hi), (m, m));
            assert!(r.sd.abs() < 1e-12 && (r.mean - m).abs() < 1e-12);
        }
        let bands = bootstrap_bands(&demo(), &ens, &[0.0, 1.0, 2.0], 0.95).unwrap();
        for j in 0..3 {
            assert!((bands.conf_hi[j] - bands.conf_lo[j]).abs() < 1e-12);
            assert!(bands.pred_lo[j] <= bands.conf_lo[j] && bands.conf_hi[j] <= bands.pred_hi[j]);
        }
    }

    #[test]
    fn parametric_mode_runs() {
        let ens = parametric_bootstrap_ensemble(&demo(), 1, 200, &RngState::new(4)).unwrap();
        let s = percentile_summary(&ens, 0.9).unwrap();
        assert!((s[1].mean - 1.5).abs() < 0.05);
        assert_eq!(ens.mode, BootstrapMode::Parametric);
    }

    #[test]
    fn tie_at_maximum() {
        let ds = ShockDataset::from_velocities("t", &[0.0, 1.0, 2.0, 2.0], &[1.0, 2.0, 3.0, 3.1]).unwrap();
        assert!(matches!(max_up_index(&ds), Err(Error::TieBreak { count: 2, .. })));
        assert!(sensitivity_drop_max_up(&ds, 1, 10, 10, &RngState::new(0)).is_err());
    }

    #[test]
    fn drop_then_reinsert_round_trip() {
        let ds = demo();
        let idx = max_up_index(&ds).unwrap();
        let p = ds.points()[idx];
        let back = ds.without(idx).unwrap().with_inserted(idx, p, None, None).unwrap();
        let rng = RngState::new(8);
        let a = sensitivity_drop_max_up(&ds, 1, 100, 100, &rng).unwrap();
        let b = sensitivity_drop_max_up(&back, 1, 100, 100, &rng).unwrap();
        assert_eq!(a, b);
    }
}
