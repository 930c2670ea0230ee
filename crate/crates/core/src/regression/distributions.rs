//! The t and inverse-gamma laws that the conjugate posterior factors into.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::linalg::{LowerTriangular, SymMatrix};
use crate::stats::rng::{RngState, Stream};
use crate::stats::sampling::{chi_square, gamma, std_normal};
use crate::stats::special::{ln_gamma, student_t_ln_pdf, student_t_quantile};

use super::ellipse::CredibleEllipse;

/// Number of consecutive draws that share one child stream. Fixed, so the
/// output does not depend on how chunks are spread over threads.
pub(crate) const DRAWS_PER_STREAM: usize = 256;

/// Row-major batch of vector draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.dim)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let mut m = vec![0.0; self.dim];
        for r in self.rows() {
            for (a, b) in m.iter_mut().zip(r) {
                *a += b;
            }
        }
        m.iter_mut().for_each(|v| *v /= n);
        m
    }

    /// Sample covariance (n − 1 denominator).
    pub fn covariance(&self) -> SymMatrix {
        let mean = self.mean();
        let n = self.len() as f64;
        let d = self.dim;
        let mut acc = vec![0.0; d * d];
        for r in self.rows() {
            for i in 0..d {
                let di = r[i] - mean[i];
                for j in i..d {
                    acc[i * d + j] += di * (r[j] - mean[j]);
                }
            }
        }
        SymMatrix::from_upper_fn(d, |i, j| acc[i * d + j] / (n - 1.0))
    }
}

/// Runs `draw` for `count` items, giving each block of [`DRAWS_PER_STREAM`]
/// consecutive items its own child stream of `rng`.
pub(crate) fn par_draws<T, F>(rng: &RngState, count: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Stream) -> T + Sync,
{
    let blocks = count.div_ceil(DRAWS_PER_STREAM);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut st = rng.child(b as u64).stream();
            let len = DRAWS_PER_STREAM.min(count - b * DRAWS_PER_STREAM);
            (0..len).map(|_| draw(&mut st)).collect::<Vec<_>>()
        })
        .collect()
}

/// Multivariate t with location `mean`, scale matrix `scale` and `nu`
/// degrees of freedom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivariateT {
    pub mean: Vec<f64>,
    pub scale: SymMatrix,
    pub nu: f64,
}

impl MultivariateT {
    pub fn new(mean: Vec<f64>, scale: SymMatrix, nu: f64) -> Result<Self> {
        if mean.len() != scale.dim() {
            return Err(Error::Domain("mean and scale dimensions differ".into()));
        }
        if !(nu > 0.0) {
            return Err(Error::Domain(format!("degrees of freedom must be positive, got {nu}")));
        }
        scale.cholesky()?;
        Ok(MultivariateT { mean, scale, nu })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// `(ν / (ν − 2)) · scale`.
    pub fn covariance(&self) -> Result<SymMatrix> {
        if !(self.nu > 2.0) {
            return Err(Error::UndefinedCovariance { nu: self.nu });
        }
        Ok(self.scale.scaled(self.nu / (self.nu - 2.0)))
    }

    /// `(β − μ)ᵀ scale⁻¹ (β − μ)`.
    pub fn mahalanobis(&self, beta: &[f64]) -> Result<f64> {
        let l = self.scale.cholesky()?;
        let diff: Vec<f64> = beta.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        Ok(l.solve_lower(&diff).iter().map(|v| v * v).sum())
    }

    pub fn ln_density(&self, beta: &[f64]) -> Result<f64> {
        let p = self.dim() as f64;
        let nu = self.nu;
        let q = self.mahalanobis(beta)?;
        let ln_det = self.scale.cholesky()?.diag().iter().map(|d| 2.0 * d.ln()).sum::<f64>();
        Ok(ln_gamma(0.5 * (nu + p)) - ln_gamma(0.5 * nu) - 0.5 * p * (nu * std::f64::consts::PI).ln()
            - 0.5 * ln_det
            - 0.5 * (nu + p) * (q / nu).ln_1p())
    }

    pub fn density(&self, beta: &[f64]) -> Result<f64> {
        Ok(self.ln_density(beta)?.exp())
    }

    /// Marginal of coefficient `index`.
    pub fn marginal(&self, index: usize) -> UnivariateT {
        UnivariateT {
            mean: self.mean[index],
            scale: self.scale.get(index, index),
            nu: self.nu,
        }
    }

    /// Equal-tailed interval `mean ± t_{(1±level)/2, ν} √scale_ii`.
    pub fn credible_interval(&self, index: usize, level: f64) -> Result<(f64, f64)> {
        self.marginal(index).interval(level)
    }

    /// One draw `μ + L z √(ν / w)` with `z ~ N(0, I)`, `w ~ χ²_ν`.
    pub fn draw(&self, chol: &LowerTriangular, st: &mut Stream, out: &mut [f64]) {
        let z: Vec<f64> = (0..self.dim()).map(|_| std_normal(st)).collect();
        let w = chi_square(st, self.nu);
        let factor = (self.nu / w).sqrt();
        chol.mul_vec_into(&z, out);
        for (o, m) in out.iter_mut().zip(&self.mean) {
            *o = *o * factor + m;
        }
    }

    /// `count` i.i.d. draws, deterministic in `rng` and independent of the
    /// number of worker threads.
    pub fn sample(&self, count: usize, rng: &RngState) -> Result<SampleBatch> {
        let chol = self.scale.cholesky()?;
        let d = self.dim();
        let rows = par_draws(rng, count, |st| {
            let mut out = vec![0.0; d];
            self.draw(&chol, st, &mut out);
            out
        });
        Ok(SampleBatch {
            dim: d,
            data: rows.concat(),
        })
    }

    /// Elliptical credible region `{β : (β−μ)ᵀ scale⁻¹ (β−μ) ≤ 2 F_{level,2,ν}}`.
    pub fn ellipse(&self, level: f64) -> Result<CredibleEllipse> {
        CredibleEllipse::new(&self.mean, &self.scale, self.nu, level)
    }
}

/// Univariate t with location `mean`, squared scale `scale` and `nu` degrees
/// of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnivariateT {
    pub mean: f64,
    /// Variance-like scale, before the ν/(ν−2) inflation.
    pub scale: f64,
    pub nu: f64,
}

impl UnivariateT {
    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.mean + student_t_quantile(p, self.nu)? * self.scale.sqrt())
    }

    pub fn interval(&self, level: f64) -> Result<(f64, f64)> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
        }
        let t = student_t_quantile(0.5 * (1.0 + level), self.nu)?;
        let half = t * self.scale.sqrt();
        Ok((self.mean - half, self.mean + half))
    }

    pub fn variance(&self) -> Result<f64> {
        if !(self.nu > 2.0) {
            return Err(Error::UndefinedCovariance { nu: self.nu });
        }
        Ok(self.scale * self.nu / (self.nu - 2.0))
    }

    pub fn sd(&self) -> Result<f64> {
        Ok(self.variance()?.sqrt())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let s = self.scale.sqrt();
        (student_t_ln_pdf((x - self.mean) / s, self.nu)).exp() / s
    }
}

/// Inverse-gamma law with shape `a` and scale `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseGamma {
    pub shape: f64,
    pub scale: f64,
}

impl InverseGamma {
    pub fn mean(&self) -> Result<f64> {
        if !(self.shape > 1.0) {
            return Err(Error::UndefinedMoment {
                moment: "mean of sigma^2",
                requirement: format!(
                    "shape a > 1, got a = {} (for the straight-line flat-prior fit: n > 4)",
                    self.shape
                ),
            });
        }
        Ok(self.scale / (self.shape - 1.0))
    }

    pub fn variance(&self) -> Result<f64> {
        if !(self.shape > 2.0) {
            return Err(Error::UndefinedMoment {
                moment: "standard deviation of sigma^2",
                requirement: format!(
                    "shape a > 2, got a = {} (for the straight-line flat-prior fit: n > 6)",
                    self.shape
                ),
            });
        }
        let am1 = self.shape - 1.0;
        Ok(self.scale * self.scale / (am1 * am1 * (self.shape - 2.0)))
    }

    pub fn sd(&self) -> Result<f64> {
        Ok(self.variance()?.sqrt())
    }

    /// Mode `b / (a + 1)`.
    pub fn mode(&self) -> f64 {
        self.scale / (self.shape + 1.0)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.scale.ln() - ln_gamma(self.shape) - (self.shape + 1.0) * x.ln() - self.scale / x
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn draw(&self, st: &mut Stream) -> f64 {
        self.scale / gamma(st, self.shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_gamma_moments_and_boundaries() {
        let ig = InverseGamma { shape: 5.0, scale: 8.0 };
        assert_eq!(ig.mean().unwrap(), 2.0);
        assert!((ig.variance().unwrap() - 64.0 / 48.0).abs() < 1e-15);
        // a = 1.5 is n = 5 for the straight-line flat-prior fit
        let ig = InverseGamma { shape: 1.5, scale: 1.0 };
        assert!(ig.mean().is_ok());
        assert!(matches!(ig.sd(), Err(Error::UndefinedMoment { .. })));
        let ig = InverseGamma { shape: 1.0, scale: 1.0 };
        assert!(matches!(ig.mean(), Err(Error::UndefinedMoment { .. })));
    }

    #[test]
    fn inverse_gamma_density_integrates_to_one() {
        let ig = InverseGamma { shape: 3.5, scale: 2.0 };
        // integrate in log space: ∫ p(x) x du, x = e^u
        let (lo, hi, m) = (-8.0_f64, 8.0_f64, 20_000);
        let h = (hi - lo) / m as f64;
        let total: f64 = (0..m)
            .map(|i| {
                let x = (lo + (i as f64 + 0.5) * h).exp();
                ig.pdf(x) * x * h
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn univariate_interval_symmetry() {
        let t = UnivariateT { mean: 3.0, scale: 0.25, nu: 7.0 };
        let (lo, hi) = t.interval(0.9).unwrap();
        assert!(((lo + hi) / 2.0 - 3.0).abs() < 1e-14);
        let (lo, hi) = t.interval(1e-12).unwrap();
        assert!((hi - lo) < 1e-11);
        assert!(t.interval(1.0).is_err());
    }

    #[test]
    fn covariance_requires_nu_above_two() {
        let m = MultivariateT::new(vec![0.0, 0.0], SymMatrix::identity(2), 4.0).unwrap();
        let c = m.covariance().unwrap();
        assert_eq!(c.diag(), vec![2.0, 2.0]);
        let m = MultivariateT::new(vec![0.0, 0.0], SymMatrix::identity(2), 2.0).unwrap();
        assert!(matches!(m.covariance(), Err(Error::UndefinedCovariance { .. })));
    }

    #[test]
    fn sampling_is_deterministic_and_chunked() {
        let m = MultivariateT::new(vec![1.0, 2.0], SymMatrix::diagonal(&[0.5, 2.0]), 6.0).unwrap();
        let rng = RngState::new(99);
        let a = m.sample(1000, &rng).unwrap();
        let b = m.sample(1000, &rng).unwrap();
        assert_eq!(a, b);
        // a prefix of a longer batch is the shorter batch
        let c = m.sample(300, &rng).unwrap();
        assert_eq!(&a.data[..600], &c.data[..]);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let d = pool.install(|| m.sample(1000, &rng).unwrap());
        assert_eq!(a, d);
    }
}
