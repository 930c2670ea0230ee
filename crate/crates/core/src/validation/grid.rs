//! Brute-force posterior on a three-dimensional grid over `(C0, S, σ²)`.
//!
//! The unnormalized density is the Gaussian likelihood evaluated directly
//! from the data times the `1/σ²` prior. Nothing here uses the conjugate
//! algebra, so it checks the closed forms independently.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::ShockDataset;
use crate::error::{Error, Result};
use crate::regression::fit::{fit_least_squares, FitResult};
use crate::regression::posterior::{posterior_noninformative, PosteriorNIG};
use crate::stats::special::{reg_inc_gamma_upper, student_t_quantile};

/// Largest tolerated posterior mass on the outer faces of the grid.
pub const MAX_BOUNDARY_MASS: f64 = 1e-6;

/// How cell centres are spread between `lo` and `hi`. Cells are uniform
/// in the transformed coordinate and weighted by the Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
    /// `x = center + width · sinh(u)`: fine near `center`, reaching far out.
    Sinh { center: f64, width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        Axis { lo, hi, points, spacing: Spacing::Linear }
    }

    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        Axis { lo, hi, points, spacing: Spacing::Log }
    }

    pub fn sinh(center: f64, width: f64, lo: f64, hi: f64, points: usize) -> Self {
        Axis {
            lo,
            hi,
            points,
            spacing: Spacing::Sinh { center, width },
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Config(format!("{name} axis needs lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.points < 11 {
            return Err(Error::Config(format!("{name} axis needs at least 11 points, got {}", self.points)));
        }
        match self.spacing {
            Spacing::Log if self.lo <= 0.0 => Err(Error::Config(format!("{name} log axis must be positive"))),
            Spacing::Sinh { width, .. } if !(width > 0.0) => Err(Error::Config(format!("{name} sinh width must be positive"))),
            _ => Ok(()),
        }
    }

    fn forward(&self, x: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => x,
            Spacing::Log => x.ln(),
            Spacing::Sinh { center, width } => ((x - center) / width).asinh(),
        }
    }

    /// Cell centres and cell widths.
    pub fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let (u0, u1) = (self.forward(self.lo), self.forward(self.hi));
        let du = (u1 - u0) / self.points as f64;
        (0..self.points)
            .map(|i| {
                let u = u0 + (i as f64 + 0.5) * du;
                match self.spacing {
                    Spacing::Linear => (u, du),
                    Spacing::Log => (u.exp(), u.exp() * du),
                    Spacing::Sinh { center, width } => (center + width * u.sinh(), width * u.cosh() * du),
                }
            })
            .unzip()
    }

    /// Widest cell.
    pub fn max_spacing(&self) -> f64 {
        self.nodes().1.into_iter().fold(0.0, f64::max)
    }

    pub fn refined(&self, factor: usize) -> Self {
        Axis {
            points: self.points * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub c0: Axis,
    pub s: Axis,
    pub sigma2: Axis,
}

impl GridSpec {
    /// Linear coefficient axes over `β̂ ± half_width` closed-form posterior
    /// sds and a log σ² axis over `[s²/20, 20 s²]`.
    pub fn around_fit(fit: &FitResult, points: usize, half_width: f64) -> Result<Self> {
        let sd = coefficient_scale(fit)?;
        let b = &fit.beta_hat;
        Ok(GridSpec {
            c0: Axis::linear(b[0] - half_width * sd[0], b[0] + half_width * sd[0], points),
            s: Axis::linear(b[1] - half_width * sd[1], b[1] + half_width * sd[1], points),
            sigma2: Axis::log(fit.s2 / 20.0, 20.0 * fit.s2, points),
        })
    }

    /// Axes for small samples whose posterior has heavy tails: sinh-spaced
    /// coefficients out to the `tail` quantiles of the marginal t, and a log
    /// σ² axis between the `tail` quantiles of the inverse gamma.
    pub fn heavy_tailed(fit: &FitResult, points: usize, tail: f64) -> Result<Self> {
        let scale = coefficient_scale(fit)?;
        let nu = fit.nu as f64;
        let reach = -student_t_quantile(tail, nu)?;
        let b = &fit.beta_hat;
        let a = 0.5 * nu;
        let bb = 0.5 * nu * fit.s2;
        Ok(GridSpec {
            c0: Axis::sinh(b[0], scale[0], b[0] - reach * scale[0], b[0] + reach * scale[0], points),
            s: Axis::sinh(b[1], scale[1], b[1] - reach * scale[1], b[1] + reach * scale[1], points),
            sigma2: Axis::log(inverse_gamma_quantile(a, bb, tail), inverse_gamma_quantile(a, bb, 1.0 - tail), points),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.c0.validate("C0")?;
        self.s.validate("S")?;
        self.sigma2.validate("sigma^2")
    }

    pub fn refined(&self, factor: usize) -> Self {
        GridSpec {
            c0: self.c0.refined(factor),
            s: self.s.refined(factor),
            sigma2: self.sigma2.refined(factor),
        }
    }
}

/// `√(s² (XᵀX)⁻¹_kk)` for the two coefficients.
fn coefficient_scale(fit: &FitResult) -> Result<[f64; 2]> {
    if fit.degree != 1 {
        return Err(Error::UnsupportedDegree(fit.degree));
    }
    if !(fit.s2 > 0.0) {
        return Err(Error::DegenerateResiduals);
    }
    Ok([fit.sigma_scale.get(0, 0).sqrt(), fit.sigma_scale.get(1, 1).sqrt()])
}

/// Quantile of `IG(a, b)` by bisection on `P(σ² ≤ x) = Q(a, b/x)`.
pub fn inverse_gamma_quantile(a: f64, b: f64, p: f64) -> f64 {
    let cdf = |x: f64| reg_inc_gamma_upper(a, b / x);
    let (mut lo, mut hi) = ((b / a).ln() - 1.0, (b / a).ln() + 1.0);
    while cdf(lo.exp()) > p {
        lo -= 2.0;
    }
    while cdf(hi.exp()) < p {
        hi += 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid.exp()) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Posterior mean and sd of one parameter, from the grid and in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterCheck {
    pub parameter: String,
    pub closed_form_mean: Option<f64>,
    pub grid_mean: f64,
    pub closed_form_sd: Option<f64>,
    pub grid_sd: f64,
    /// Largest relative difference over the moments defined in closed form.
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOracle {
    pub grid: GridSpec,
    pub parameters: Vec<ParameterCheck>,
    /// Mass on the outer faces of the grid.
    pub boundary_mass: f64,
    /// Centre of the cell with the largest density.
    pub mode_cell: [f64; 3],
    /// Indices of that cell.
    pub mode_index: [usize; 3],
}

impl GridOracle {
    pub fn parameter(&self, name: &str) -> Option<&ParameterCheck> {
        self.parameters.iter().find(|p| p.parameter == name)
    }

    pub fn max_rel_err(&self) -> f64 {
        self.parameters.iter().filter_map(|p| p.rel_err).fold(0.0, f64::max)
    }
}

struct Moments {
    w: f64,
    m: [f64; 3],
    q: [f64; 3],
}

/// Evaluates the flat-prior posterior on `grid` for the straight-line model.
pub fn grid_posterior_oracle(ds: &ShockDataset, degree: usize, grid: &GridSpec) -> Result<GridOracle> {
    if degree != 1 {
        return Err(Error::UnsupportedDegree(degree));
    }
    grid.validate()?;
    let fit = fit_least_squares(ds, 1)?;
    let post = posterior_noninformative(&fit)?;
    let (up, us) = (ds.up(), ds.us());
    let n = up.len() as f64;

    let (c0, wc) = grid.c0.nodes();
    let (s, ws) = grid.s.nodes();
    let (v, wv) = grid.sigma2.nodes();
    let (nc, ns, nv) = (c0.len(), s.len(), v.len());

    // error sum of squares straight from the data at every (C0, S) node
    let sse: Vec<f64> = (0..nc * ns)
        .into_par_iter()
        .map(|ij| {
            let (a, b) = (c0[ij / ns], s[ij % ns]);
            up.iter().zip(&us).map(|(&x, &y)| (y - a - b * x).powi(2)).sum()
        })
        .collect();
    let ln_density = |ij: usize, k: usize| -(0.5 * n + 1.0) * v[k].ln() - sse[ij] / (2.0 * v[k]);

    let (peak, mode_flat) = (0..nc * ns * nv)
        .into_par_iter()
        .map(|c| (ln_density(c / nv, c % nv), c))
        .reduce(|| (f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });

    let on_face = |i: usize, j: usize, k: usize| i == 0 || j == 0 || k == 0 || i + 1 == nc || j + 1 == ns || k + 1 == nv;
    let (mom, boundary) = (0..nc)
        .into_par_iter()
        .map(|i| {
            let mut acc = Moments { w: 0.0, m: [0.0; 3], q: [0.0; 3] };
            let mut edge = 0.0;
            for j in 0..ns {
                for k in 0..nv {
                    let mass = (ln_density(i * ns + j, k) - peak).exp() * wc[i] * ws[j] * wv[k];
                    let x = [c0[i], s[j], v[k]];
                    acc.w += mass;
                    for d in 0..3 {
                        acc.m[d] += mass * x[d];
                        acc.q[d] += mass * x[d] * x[d];
                    }
                    if on_face(i, j, k) {
                        edge += mass;
                    }
                }
            }
            (acc, edge)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((Moments { w: 0.0, m: [0.0; 3], q: [0.0; 3] }, 0.0), |(mut a, e), (b, f)| {
            a.w += b.w;
            for d in 0..3 {
                a.m[d] += b.m[d];
                a.q[d] += b.q[d];
            }
            (a, e + f)
        });

    let boundary_mass = boundary / mom.w;
    if boundary_mass > MAX_BOUNDARY_MASS {
        return Err(Error::GridTooCoarse { boundary_mass });
    }
    let mean: Vec<f64> = mom.m.iter().map(|m| m / mom.w).collect();
    let sd: Vec<f64> = (0..3).map(|d| (mom.q[d] / mom.w - mean[d] * mean[d]).max(0.0).sqrt()).collect();

    let closed = closed_form_moments(&post);
    let names = ["C0", "S", "sigma2"];
    let parameters = (0..3)
        .map(|d| {
            let (cm, cs) = closed[d];
            let rel = |c: Option<f64>, g: f64| c.map(|c| ((g - c) / c).abs());
            let rel_err = [rel(cm, mean[d]), rel(cs, sd[d])].into_iter().flatten().reduce(f64::max);
            ParameterCheck {
                parameter: names[d].to_string(),
                closed_form_mean: cm,
                grid_mean: mean[d],
                closed_form_sd: cs,
                grid_sd: sd[d],
                rel_err,
            }
        })
        .collect();

    let (ij, k) = (mode_flat / nv, mode_flat % nv);
    let (i, j) = (ij / ns, ij % ns);
    Ok(GridOracle {
        grid: *grid,
        parameters,
        boundary_mass,
        mode_cell: [c0[i], s[j], v[k]],
        mode_index: [i, j, k],
    })
}

/// Closed-form `(mean, sd)` of C0, S and σ²; `None` where undefined.
fn closed_form_moments(post: &PosteriorNIG) -> [(Option<f64>, Option<f64>); 3] {
    let t = post.marginal_beta();
    let coef = |k: usize| {
        let m = t.marginal(k);
        (Some(m.mean), m.sd().ok())
    };
    let ig = post.sigma2();
    [coef(0), coef(1), (ig.mean().ok(), ig.sd().ok())]
}

/// Normalized cell masses over the whole grid (row-major `C0, S, σ²`),
/// for diagnostics on small grids.
pub fn grid_cell_masses(ds: &ShockDataset, grid: &GridSpec) -> Result<Vec<f64>> {
    grid.validate()?;
    let (up, us) = (ds.up(), ds.us());
    let n = up.len() as f64;
    let (c0, wc) = grid.c0.nodes();
    let (s, ws) = grid.s.nodes();
    let (v, wv) = grid.sigma2.nodes();
    let mut ln: Vec<f64> = Vec::with_capacity(c0.len() * s.len() * v.len());
    for (i, &a) in c0.iter().enumerate() {
        for (j, &b) in s.iter().enumerate() {
            let sse: f64 = up.iter().zip(&us).map(|(&x, &y)| (y - a - b * x).powi(2)).sum();
            for (k, &var) in v.iter().enumerate() {
                ln.push(-(0.5 * n + 1.0) * var.ln() - sse / (2.0 * var) + (wc[i] * ws[j] * wv[k]).ln());
            }
        }
    }
    let peak = ln.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut mass: Vec<f64> = ln.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|m| *m /= total);
    Ok(mass)
}

/// Lower-tail probability `P(σ² ≤ x)` under `IG(a, b)`.
pub fn inverse_gamma_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        reg_inc_gamma_upper(a, b / x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_weights_cover_the_interval() {
        for axis in [
            Axis::linear(-2.0, 3.0, 40),
            Axis::log(0.01, 50.0, 40),
            Axis::sinh(1.0, 0.1, -30.0, 40.0, 40),
        ] {
            let (x, w) = axis.nodes();
            let total: f64 = w.iter().sum();
            assert!((total - (axis.hi - axis.lo)).abs() < 0.05 * (axis.hi - axis.lo), "{axis:?} {total}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(x[0] > axis.lo && x[x.len() - 1] < axis.hi);
        }
    }

    #[test]
    fn inverse_gamma_quantile_round_trip() {
        for (a, b, p) in [(2.0, 0.1, 1e-9), (8.5, 3.0, 0.5), (1.5, 1.0, 0.999)] {
            let x = inverse_gamma_quantile(a, b, p);
            assert!((inverse_gamma_cdf(a, b, x) - p).abs() < 1e-9 * p.max(1e-3), "{a} {b} {p}");
        }
    }

    #[test]
    fn rejects_bad_axes() {
        let ax = Axis::linear(0.0, 1.0, 11);
        let g = GridSpec { c0: ax, s: ax, sigma2: Axis::log(0.0, 1.0, 11) };
        assert!(matches!(g.validate(), Err(Error::Config(_))));
        let g = GridSpec { c0: Axis::linear(0.0, 1.0, 5), s: ax, sigma2: Axis::log(0.1, 1.0, 11) };
        assert!(g.validate().is_err());
    }

    fn syn6() -> ShockDataset {
        let up = [0.4, 0.9, 1.3, 1.8, 2.4, 3.1];
        let noise = [0.05, -0.07, 0.02, 0.06, -0.08, 0.03];
        let us: Vec<f64> = up.iter().zip(noise).map(|(x, e)| 3.9 + 1.5 * x + e).collect();
        ShockDataset::from_velocities("syn6", &up, &us).unwrap()
    }

    #[test]
    fn small_sample_matches_closed_form() {
        let ds = syn6();
        let fit = fit_least_squares(&ds, 1).unwrap();
        let oracle = grid_posterior_oracle(&ds, 1, &GridSpec::heavy_tailed(&fit, 101, 1e-10).unwrap()).unwrap();
        // nu = 4: the sd of sigma^2 does not exist and is not compared
        assert!(oracle.parameter("sigma2").unwrap().closed_form_sd.is_none());
        assert!(oracle.max_rel_err() < 1e-3, "{oracle:?}");
        // the narrow default sigma^2 range cannot hold this posterior
        assert!(matches!(
            grid_posterior_oracle(&ds, 1, &GridSpec::around_fit(&fit, 41, 8.0).unwrap()),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn mode_cell_brackets_joint_mode() {
        let ds = syn6();
        let fit = fit_least_squares(&ds, 1).unwrap();
        let grid = GridSpec::heavy_tailed(&fit, 61, 1e-10).unwrap();
        let oracle = grid_posterior_oracle(&ds, 1, &grid).unwrap();
        let mode = [fit.beta_hat[0], fit.beta_hat[1], fit.sse / (ds.len() as f64 + 2.0)];
        for (d, axis) in [grid.c0, grid.s, grid.sigma2].iter().enumerate() {
            let (x, w) = axis.nodes();
            let k = oracle.mode_index[d];
            assert!((x[k] - mode[d]).abs() <= w[k], "axis {d}: {} vs {}", x[k], mode[d]);
        }
    }

    #[test]
    fn cell_masses_normalize() {
        let ds = syn6();
        let fit = fit_least_squares(&ds, 1).unwrap();
        let mass = grid_cell_masses(&ds, &GridSpec::heavy_tailed(&fit, 21, 1e-8).unwrap()).unwrap();
        assert!((mass.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_moves_moments_less_than_spacing() {
        let up: Vec<f64> = (0..12).map(|i| 0.25 * i as f64).collect();
        let us: Vec<f64> = up.iter().enumerate().map(|(i, x)| 4.5 + 1.45 * x + 0.03 * ((i * 7 % 5) as f64 - 2.0)).collect();
        let ds = ShockDataset::from_velocities("syn12", &up, &us).unwrap();
        let fit = fit_least_squares(&ds, 1).unwrap();
        let coarse = GridSpec::heavy_tailed(&fit, 31, 1e-9).unwrap();
        let a = grid_posterior_oracle(&ds, 1, &coarse).unwrap();
        let b = grid_posterior_oracle(&ds, 1, &coarse.refined(2)).unwrap();
        for (d, axis) in [coarse.c0, coarse.s, coarse.sigma2].iter().enumerate() {
            let h = axis.max_spacing();
            assert!((a.parameters[d].grid_mean - b.parameters[d].grid_mean).abs() < h);
            assert!((a.parameters[d].grid_sd - b.parameters[d].grid_sd).abs() < h);
        }
    }
}
