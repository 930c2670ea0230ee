use serde::{Deserialize, Serialize};

use crate::dataset::ShockDataset;
use crate::error::{Error, Result};
use crate::stats::linalg::{LowerTriangular, SymMatrix};
use crate::stats::rng::{RngState, Stream};
use crate::stats::sampling::std_normal;

use super::distributions::{par_draws, InverseGamma, MultivariateT, SampleBatch, UnivariateT};
use super::ellipse::CredibleEllipse;
use super::fit::{design_row, fit_xy, FitResult};

/// Normal-inverse-gamma posterior of `(β, σ²)`.
///
/// Conditionally `β | σ² ~ N(beta_mean, σ² · unit_scale)` and
/// `σ² ~ IG(ig_shape, ig_scale)`. Integrating out σ² gives
/// `β ~ t(beta_mean, scale, nu)` with `scale = (b / a) · unit_scale` and
/// `nu = 2a`. Under the flat prior `unit_scale = (XᵀX)⁻¹`, `a = ν/2`,
/// `b = ν s²/2`, so `scale = s² (XᵀX)⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorNIG {
    pub degree: usize,
    pub n: usize,
    pub beta_mean: Vec<f64>,
    pub scale: SymMatrix,
    pub nu: f64,
    pub ig_shape: f64,
    pub ig_scale: f64,
    /// `(XᵀX)⁻¹` (flat prior) or `G⁻¹` (conjugate prior).
    pub unit_scale: SymMatrix,
    /// `G = XᵀX + Σ₀⁻¹`; absent for the flat prior.
    pub precision: Option<SymMatrix>,
}

impl PosteriorNIG {
    pub fn n_coefficients(&self) -> usize {
        self.beta_mean.len()
    }

    /// `b / a`; equals s² under the flat prior.
    pub fn noise_scale(&self) -> f64 {
        self.ig_scale / self.ig_shape
    }

    pub fn marginal_beta(&self) -> MultivariateT {
        MultivariateT {
            mean: self.beta_mean.clone(),
            scale: self.scale.clone(),
            nu: self.nu,
        }
    }

    pub fn sigma2(&self) -> InverseGamma {
        InverseGamma {
            shape: self.ig_shape,
            scale: self.ig_scale,
        }
    }

    pub fn is_informative(&self) -> bool {
        self.precision.is_some()
    }
}

/// Conjugate prior `β | σ² ~ N(β₀, σ² Σ₀)`, `σ² ~ IG(a₀, b₀)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NIGPrior {
    pub beta0: Vec<f64>,
    pub sigma0: SymMatrix,
    pub a0: f64,
    pub b0: f64,
}

impl NIGPrior {
    pub fn new(beta0: Vec<f64>, sigma0: SymMatrix, a0: f64, b0: f64) -> Result<Self> {
        if beta0.len() != sigma0.dim() {
            return Err(Error::Domain(format!(
                "prior mean has {} entries but the prior scale is {}x{}",
                beta0.len(),
                sigma0.dim(),
                sigma0.dim()
            )));
        }
        if !(a0 > 0.0 && b0 > 0.0 && a0.is_finite() && b0.is_finite()) {
            return Err(Error::Domain(format!("prior shape and scale must be positive, got a0={a0}, b0={b0}")));
        }
        if beta0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("prior mean must be finite".into()));
        }
        sigma0.cholesky()?;
        Ok(NIGPrior { beta0, sigma0, a0, b0 })
    }

    /// Two-coefficient prior with standard deviations `sd` and correlation
    /// `rho` between intercept and slope.
    pub fn from_correlation(beta0: [f64; 2], sd: [f64; 2], rho: f64, a0: f64, b0: f64) -> Result<Self> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(Error::Domain(format!("prior correlation must lie in (-1, 1), got {rho}")));
        }
        if !(sd[0] > 0.0 && sd[1] > 0.0) {
            return Err(Error::Domain("prior standard deviations must be positive".into()));
        }
        let off = rho * sd[0] * sd[1];
        let sigma0 = SymMatrix::from_rows(&[vec![sd[0] * sd[0], off], vec![off, sd[1] * sd[1]]])?;
        NIGPrior::new(beta0.to_vec(), sigma0, a0, b0)
    }

    pub fn degree(&self) -> usize {
        self.beta0.len() - 1
    }

    /// `(b₀ / (a₀ − 1)) Σ₀`.
    pub fn covariance(&self) -> Result<SymMatrix> {
        if !(self.a0 > 1.0) {
            return Err(Error::UndefinedMoment {
                moment: "prior covariance of beta",
                requirement: format!("a0 > 1, got a0 = {}", self.a0),
            });
        }
        Ok(self.sigma0.scaled(self.b0 / (self.a0 - 1.0)))
    }
}

/// Marginal prior of β: `t(β₀, (b₀/a₀) Σ₀, 2a₀)`.
pub fn prior_marginal(prior: &NIGPrior) -> MultivariateT {
    MultivariateT {
        mean: prior.beta0.clone(),
        scale: prior.sigma0.scaled(prior.b0 / prior.a0),
        nu: 2.0 * prior.a0,
    }
}

/// Posterior under the flat prior `p(β, σ²) ∝ 1/σ²`.
pub fn posterior_noninformative(fit: &FitResult) -> Result<PosteriorNIG> {
    if fit.nu < 1 {
        return Err(Error::TooFewPoints {
            needed: fit.n_coefficients() + 1,
            have: fit.n,
        });
    }
    if !(fit.s2 > 0.0) {
        return Err(Error::DegenerateResiduals);
    }
    let nu = fit.nu as f64;
    fit.sigma_scale.cholesky()?;
    Ok(PosteriorNIG {
        degree: fit.degree,
        n: fit.n,
        beta_mean: fit.beta_hat.clone(),
        scale: fit.sigma_scale.clone(),
        nu,
        ig_shape: 0.5 * nu,
        ig_scale: 0.5 * nu * fit.s2,
        unit_scale: fit.xtx_inv.clone(),
        precision: None,
    })
}

/// Fits and forms the flat-prior posterior in one step.
pub fn posterior_from_data(ds: &ShockDataset, degree: usize) -> Result<PosteriorNIG> {
    posterior_noninformative(&fit_xy(&ds.up(), &ds.us(), degree)?)
}

/// Conjugate update of a normal-inverse-gamma prior.
pub fn posterior_informative(ds: &ShockDataset, prior: &NIGPrior) -> Result<PosteriorNIG> {
    posterior_informative_xy(&ds.up(), &ds.us(), prior)
}

/// Same as [`posterior_informative`] on raw arrays.
pub fn posterior_informative_xy(up: &[f64], us: &[f64], prior: &NIGPrior) -> Result<PosteriorNIG> {
    let p = prior.beta0.len();
    let degree = prior.degree();
    if degree == 0 {
        return Err(Error::Domain("polynomial degree must be at least 1".into()));
    }
    if up.is_empty() || up.len() != us.len() {
        return Err(Error::EmptyInput("conjugate update needs at least one point"));
    }
    let n = up.len();
    let prior_precision = prior.sigma0.inverse().map_err(|_| Error::SingularPrecision)?;

    let mut xtx = vec![0.0; p * p];
    let mut xty = vec![0.0; p];
    for (&x, &y) in up.iter().zip(us) {
        let row = design_row(x, degree);
        for i in 0..p {
            xty[i] += row[i] * y;
            for j in i..p {
                xtx[i * p + j] += row[i] * row[j];
            }
        }
    }
    let g = SymMatrix::from_upper_fn(p, |i, j| xtx[i * p + j] + prior_precision.get(i, j));
    let chol = g.cholesky().map_err(|_| Error::SingularPrecision)?;
    let p0b0 = prior_precision.mul_vec(&prior.beta0);
    let gamma: Vec<f64> = xty.iter().zip(&p0b0).map(|(a, b)| a + b).collect();
    let beta_tilde = chol.solve(&gamma);

    // b̃ in residual form, algebraically equal to
    // b₀ + ½[YᵀY + β₀ᵀΣ₀⁻¹β₀ − γᵀG⁻¹γ] without the cancellation.
    let sse: f64 = up
        .iter()
        .zip(us)
        .map(|(&x, &y)| {
            let r = y - design_row(x, degree).iter().zip(&beta_tilde).map(|(a, b)| a * b).sum::<f64>();
            r * r
        })
        .sum();
    let shift: Vec<f64> = beta_tilde.iter().zip(&prior.beta0).map(|(a, b)| a - b).collect();
    let a = prior.a0 + 0.5 * n as f64;
    let b = prior.b0 + 0.5 * (sse + prior_precision.quad_form(&shift));
    let unit_scale = chol.inverse_of_product();
    let scale = unit_scale.scaled(b / a);
    Ok(PosteriorNIG {
        degree,
        n,
        beta_mean: beta_tilde,
        scale,
        nu: 2.0 * a,
        ig_shape: a,
        ig_scale: b,
        unit_scale,
        precision: Some(g),
    })
}

/// `(ν / (ν − 2)) · scale`.
pub fn beta_covariance(post: &PosteriorNIG) -> Result<SymMatrix> {
    post.marginal_beta().covariance()
}

/// Equal-tailed credible interval for coefficient `index`.
pub fn credible_interval(post: &PosteriorNIG, index: usize, level: f64) -> Result<(f64, f64)> {
    if index >= post.n_coefficients() {
        return Err(Error::Domain(format!(
            "coefficient index {index} out of range for {} coefficients",
            post.n_coefficients()
        )));
    }
    post.marginal_beta().credible_interval(index, level)
}

/// Joint credible ellipse for the straight-line model.
pub fn credible_region_ellipse(post: &PosteriorNIG, level: f64) -> Result<CredibleEllipse> {
    if post.degree != 1 {
        return Err(Error::UnsupportedDegree(post.degree));
    }
    CredibleEllipse::new(&post.beta_mean, &post.scale, post.nu, level)
}

/// Draws from the marginal t posterior of β.
pub fn sample_beta(post: &PosteriorNIG, count: usize, rng: &RngState) -> Result<SampleBatch> {
    post.marginal_beta().sample(count, rng)
}

/// One `(β, σ²)` pair from the joint posterior.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDraw {
    pub beta: Vec<f64>,
    pub sigma2: f64,
}

/// Draws `σ² ~ IG(a, b)` then `β | σ² ~ N(mean, σ² · unit_scale)`.
pub fn sample_joint(post: &PosteriorNIG, count: usize, rng: &RngState) -> Result<Vec<JointDraw>> {
    let chol = post.unit_scale.cholesky()?;
    Ok(par_draws(rng, count, |st| {
        let (beta, sigma2) = draw_joint(post, &chol, st);
        JointDraw { beta, sigma2 }
    }))
}

pub(crate) fn draw_joint(post: &PosteriorNIG, chol: &LowerTriangular, st: &mut Stream) -> (Vec<f64>, f64) {
    let sigma2 = post.sigma2().draw(st);
    let z: Vec<f64> = (0..post.n_coefficients()).map(|_| std_normal(st)).collect();
    let sd = sigma2.sqrt();
    let beta = chol
        .mul_vec(&z)
        .iter()
        .zip(&post.beta_mean)
        .map(|(lz, m)| m + sd * lz)
        .collect();
    (beta, sigma2)
}

/// Posterior mean, standard deviation and density of σ².
#[derive(Debug)]
pub struct Sigma2Summary {
    pub mean: Result<f64>,
    pub sd: Result<f64>,
    pub law: InverseGamma,
}

impl Sigma2Summary {
    pub fn density(&self, sigma2: f64) -> f64 {
        self.law.pdf(sigma2)
    }
}

pub fn sigma2_posterior_summary(post: &PosteriorNIG) -> Sigma2Summary {
    let law = post.sigma2();
    Sigma2Summary {
        mean: law.mean(),
        sd: law.sd(),
        law,
    }
}

/// Normalized marginal posterior density of β.
pub fn marginal_beta_density(post: &PosteriorNIG, beta: &[f64]) -> Result<f64> {
    post.marginal_beta().density(beta)
}

/// Distribution of the mean shock velocity `x*ᵀβ` at particle velocity `up`.
pub fn mean_us_distribution(post: &PosteriorNIG, up: f64) -> UnivariateT {
    let x = design_row(up, post.degree);
    UnivariateT {
        mean: dot(&x, &post.beta_mean),
        scale: post.scale.quad_form(&x),
        nu: post.nu,
    }
}

/// Posterior predictive distribution of a new measurement at `up`.
pub fn predictive_distribution(post: &PosteriorNIG, up: f64) -> UnivariateT {
    let mut t = mean_us_distribution(post, up);
    t.scale += post.noise_scale();
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandKind {
    Credible,
    Prediction,
}

/// Pointwise band over a particle-velocity grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UsBand {
    pub kind: BandKind,
    pub level: f64,
    pub up: Vec<f64>,
    pub mean: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

pub fn band(post: &PosteriorNIG, up_grid: &[f64], level: f64, kind: BandKind) -> Result<UsBand> {
    if up_grid.is_empty() {
        return Err(Error::EmptyInput("band needs a non-empty particle-velocity grid"));
    }
    let mut out = UsBand {
        kind,
        level,
        up: up_grid.to_vec(),
        mean: Vec::with_capacity(up_grid.len()),
        lo: Vec::with_capacity(up_grid.len()),
        hi: Vec::with_capacity(up_grid.len()),
    };
    for &x in up_grid {
        let t = match kind {
            BandKind::Credible => mean_us_distribution(post, x),
            BandKind::Prediction => predictive_distribution(post, x),
        };
        let (lo, hi) = t.interval(level)?;
        out.mean.push(t.mean);
        out.lo.push(lo);
        out.hi.push(hi);
    }
    Ok(out)
}

/// `count` uniform points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo + step * i as f64 })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
