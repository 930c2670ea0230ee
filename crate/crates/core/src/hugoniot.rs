//! Rankine-Hugoniot jump conditions and pressure-volume credible bands.
//!
//! Units: km/s, g/cm³, GPa, cm³/g, kJ/g. With these, ρ₀·Us·Up is already
//! in GPa.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{summarize, ShockDataset};
use crate::error::{Error, Result};
use crate::regression::fit::eval_poly;
use crate::regression::posterior::{linspace, sample_beta, PosteriorNIG};
use crate::stats::quantile::quantiles_in_place;
use crate::stats::rng::RngState;

/// One bar.
pub const DEFAULT_P0_GPA: f64 = 1e-4;
pub const DEFAULT_GRID_POINTS: usize = 200;
/// Largest tolerated fraction of unphysical posterior draws.
pub const MAX_REJECTION_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub rho0: f64,
    pub p0: f64,
    pub e0: Option<f64>,
}

impl InitialState {
    pub fn new(rho0: f64, p0: f64, e0: Option<f64>) -> Result<Self> {
        if !(rho0 > 0.0 && rho0.is_finite()) {
            return Err(Error::Config(format!("initial density must be positive, got {rho0}")));
        }
        if !(p0 >= 0.0 && p0.is_finite()) {
            return Err(Error::Config(format!("initial pressure must be non-negative, got {p0}")));
        }
        if let Some(e) = e0 {
            if !e.is_finite() {
                return Err(Error::Config("initial energy must be finite".into()));
            }
        }
        Ok(InitialState { rho0, p0, e0 })
    }

    pub fn with_density(rho0: f64) -> Result<Self> {
        InitialState::new(rho0, DEFAULT_P0_GPA, None)
    }

    pub fn v0(&self) -> f64 {
        1.0 / self.rho0
    }
}

/// Explicit value, else the dataset's mean initial density, else an error.
pub fn resolve_rho0(explicit: Option<f64>, ds: &ShockDataset) -> Result<f64> {
    if let Some(r) = explicit {
        return Ok(r);
    }
    summarize(ds).mean_rho0.ok_or_else(|| {
        Error::Config(format!(
            "no initial density for '{}': pass --rho0 or add a rho0_g_cm3 column",
            ds.material()
        ))
    })
}

/// Default particle-velocity grid spanning the data.
pub fn default_up_grid(ds: &ShockDataset, points: usize) -> Vec<f64> {
    let up = ds.up();
    let lo = up.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = up.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    linspace(lo, hi, points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PVCurve {
    pub up: Vec<f64>,
    pub us: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
    pub e: Option<Vec<f64>>,
}

impl PVCurve {
    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// `(v, p)` sorted by increasing volume.
    fn by_volume(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self.v.iter().cloned().zip(self.p.iter().cloned()).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    }

    fn volume_range(&self) -> (f64, f64) {
        self.v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// True when volume strictly decreases as particle velocity increases.
    pub fn is_monotone(&self) -> bool {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.up[a].total_cmp(&self.up[b]));
        idx.windows(2)
            .all(|w| self.up[w[0]] == self.up[w[1]] || self.v[w[1]] < self.v[w[0]])
    }
}

/// Maps coefficients to `(V, P, E)` along `up_grid` via mass, momentum and
/// energy conservation.
pub fn rh_transform(beta: &[f64], up_grid: &[f64], init: &InitialState) -> Result<PVCurve> {
    let v0 = init.v0();
    let us: Vec<f64> = up_grid.iter().map(|&x| eval_poly(beta, x)).collect();
    let bad: Vec<usize> = up_grid
        .iter()
        .zip(&us)
        .enumerate()
        .filter(|(_, (&x, &u))| !(u > 0.0 && u > x && u.is_finite()))
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::UnphysicalRegion { indices: bad });
    }
    let v: Vec<f64> = up_grid.iter().zip(&us).map(|(&x, &u)| v0 * (u - x) / u).collect();
    let p: Vec<f64> = up_grid
        .iter()
        .zip(&us)
        .map(|(&x, &u)| init.p0 + init.rho0 * u * x)
        .collect();
    let e = init.e0.map(|e0| {
        p.iter()
            .zip(&v)
            .map(|(&pi, &vi)| e0 + 0.5 * (pi + init.p0) * (v0 - vi))
            .collect()
    });
    Ok(PVCurve {
        up: up_grid.to_vec(),
        us,
        v,
        p,
        e,
    })
}

/// Accepted curves and how many draws were rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub curves: Vec<PVCurve>,
    pub rejected: usize,
    pub drawn: usize,
}

fn physical_curve(beta: &[f64], up_grid: &[f64], init: &InitialState) -> Option<PVCurve> {
    rh_transform(beta, up_grid, init).ok().filter(PVCurve::is_monotone)
}

fn check_rejections(rejected: usize, drawn: usize) -> Result<()> {
    if rejected as f64 > MAX_REJECTION_FRACTION * drawn as f64 {
        return Err(Error::ExcessiveRejection { rejected, total: drawn });
    }
    Ok(())
}

/// Draws coefficient vectors from the posterior and maps each to a curve.
/// Draws with `us ≤ up`, `us ≤ 0` or a non-monotone volume are rejected and
/// counted.
pub fn sample_pv_curves(
    post: &PosteriorNIG,
    count: usize,
    up_grid: &[f64],
    init: &InitialState,
    rng: &RngState,
) -> Result<CurveSample> {
    let draws = sample_beta(post, count, rng)?;
    let maybe: Vec<Option<PVCurve>> = draws
        .data
        .par_chunks(draws.dim)
        .map(|beta| physical_curve(beta, up_grid, init))
        .collect();
    let rejected = maybe.iter().filter(|c| c.is_none()).count();
    check_rejections(rejected, count)?;
    Ok(CurveSample {
        curves: maybe.into_iter().flatten().collect(),
        rejected,
        drawn: count,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PVBand {
    pub v_grid: Vec<f64>,
    pub p_lo: Vec<f64>,
    pub p_hi: Vec<f64>,
    pub level: f64,
    pub p_mean: Option<Vec<f64>>,
}

impl PVBand {
    pub fn width(&self) -> Vec<f64> {
        self.p_hi.iter().zip(&self.p_lo).map(|(h, l)| h - l).collect()
    }

    /// Band width at specific volume `v`, linearly interpolated.
    pub fn width_at(&self, v: f64) -> Option<f64> {
        let w = self.width();
        interpolate(&self.v_grid, &w, v)
    }
}

/// Linear interpolation on increasing abscissae; `None` outside the range.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    let n = xs.len();
    if n == 0 || x < xs[0] || x > xs[n - 1] {
        return None;
    }
    let k = xs.partition_point(|&a| a < x);
    if k == 0 {
        return Some(ys[0]);
    }
    if xs[k.min(n - 1)] == x {
        return Some(ys[k]);
    }
    let (x0, x1, y0, y1) = (xs[k - 1], xs[k], ys[k - 1], ys[k]);
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

fn interpolate_onto(pts: &[(f64, f64)], grid: &[f64], out: &mut [f64]) {
    let mut k = 0;
    for (o, &v) in out.iter_mut().zip(grid) {
        while k + 2 < pts.len() && pts[k + 1].0 < v {
            k += 1;
        }
        let (v0, p0) = pts[k];
        let (v1, p1) = pts[k + 1];
        *o = if v1 == v0 { p0 } else { p0 + (p1 - p0) * (v - v0) / (v1 - v0) };
    }
}

fn common_volume_grid(ranges: impl Iterator<Item = (f64, f64)>, size: usize) -> Result<Vec<f64>> {
    let (lo, hi) = ranges.fold((f64::NEG_INFINITY, f64::INFINITY), |(lo, hi), (a, b)| (lo.max(a), hi.min(b)));
    if !(lo < hi) {
        return Err(Error::EmptyIntersection);
    }
    Ok(linspace(lo, hi, size))
}

fn band_from_columns(
    v_grid: Vec<f64>,
    level: f64,
    columns: impl Fn(std::ops::Range<usize>) -> Vec<Vec<f64>> + Sync,
) -> Result<PVBand> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    let probs = [0.5 * (1.0 - level), 0.5 * (1.0 + level)];
    let m = v_grid.len();
    let mut p_lo = Vec::with_capacity(m);
    let mut p_hi = Vec::with_capacity(m);
    let mut p_mean = Vec::with_capacity(m);
    const BLOCK: usize = 20;
    for start in (0..m).step_by(BLOCK) {
        let cols = columns(start..(start + BLOCK).min(m));
        let stats: Vec<(f64, f64, f64)> = cols
            .into_par_iter()
            .map(|mut col| {
                let mean = col.iter().sum::<f64>() / col.len() as f64;
                let q = quantiles_in_place(&mut col, &probs);
                (q[0], q[1], mean)
            })
            .collect();
        for (lo, hi, mean) in stats {
            p_lo.push(lo);
            p_hi.push(hi);
            p_mean.push(mean);
        }
    }
    Ok(PVBand {
        v_grid,
        p_lo,
        p_hi,
        level,
        p_mean: Some(p_mean),
    })
}

/// Interpolates every curve onto a common volume grid over the intersection
/// of their volume ranges and takes pointwise pressure quantiles.
pub fn pv_band(curves: &[PVCurve], level: f64, v_grid_size: usize) -> Result<PVBand> {
    if curves.is_empty() {
        return Err(Error::EmptyInput("pressure-volume band needs at least one curve"));
    }
    if v_grid_size < 2 {
        return Err(Error::Config("volume grid needs at least 2 points".into()));
    }
    if curves.iter().any(|c| c.len() < 2) {
        return Err(Error::Config("curves need at least 2 grid points".into()));
    }
    let v_grid = common_volume_grid(curves.iter().map(PVCurve::volume_range), v_grid_size)?;
    let sorted: Vec<Vec<(f64, f64)>> = curves.par_iter().map(PVCurve::by_volume).collect();
    let grid = &v_grid;
    band_from_columns(v_grid.clone(), level, |cols| {
        let sub = &grid[cols.clone()];
        let rows: Vec<Vec<f64>> = sorted
            .par_iter()
            .map(|pts| {
                let mut out = vec![0.0; sub.len()];
                interpolate_onto(pts, sub, &mut out);
                out
            })
            .collect();
        transpose(&rows, sub.len())
    })
}

fn transpose(rows: &[Vec<f64>], width: usize) -> Vec<Vec<f64>> {
    (0..width).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

/// Band together with the rejection bookkeeping of the draws behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorPVBand {
    pub band: PVBand,
    pub drawn: usize,
    pub rejected: usize,
}

/// Same result as `pv_band(sample_pv_curves(..).curves, ..)` but only the
/// coefficient draws are held in memory; curves are rebuilt per block of
/// volumes.
pub fn posterior_pv_band(
    post: &PosteriorNIG,
    count: usize,
    up_grid: &[f64],
    init: &InitialState,
    level: f64,
    v_grid_size: usize,
    rng: &RngState,
) -> Result<PosteriorPVBand> {
    if v_grid_size < 2 {
        return Err(Error::Config("volume grid needs at least 2 points".into()));
    }
    if up_grid.len() < 2 {
        return Err(Error::Config("particle-velocity grid needs at least 2 points".into()));
    }
    let draws = sample_beta(post, count, rng)?;
    let ranges: Vec<Option<(f64, f64)>> = draws
        .data
        .par_chunks(draws.dim)
        .map(|beta| physical_curve(beta, up_grid, init).map(|c| c.volume_range()))
        .collect();
    let rejected = ranges.iter().filter(|r| r.is_none()).count();
    check_rejections(rejected, count)?;
    let kept: Vec<&[f64]> = draws
        .data
        .chunks(draws.dim)
        .zip(&ranges)
        .filter(|(_, r)| r.is_some())
        .map(|(b, _)| b)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyInput("every posterior draw was unphysical"));
    }
    let v_grid = common_volume_grid(ranges.iter().flatten().cloned(), v_grid_size)?;
    let grid = &v_grid;
    let band = band_from_columns(v_grid.clone(), level, |cols| {
        let sub = &grid[cols.clone()];
        let rows: Vec<Vec<f64>> = kept
            .par_iter()
            .map(|beta| {
                let curve = rh_transform(beta, up_grid, init).expect("curve was accepted above");
                let mut out = vec![0.0; sub.len()];
                interpolate_onto(&curve.by_volume(), sub, &mut out);
                out
            })
            .collect();
        transpose(&rows, sub.len())
    })?;
    Ok(PosteriorPVBand {
        band,
        drawn: count,
        rejected,
    })
}
