use serde::{Deserialize, Serialize};

use crate::dataset::ShockDataset;
use crate::error::{Error, Result};
use crate::stats::linalg::{least_squares_qr, SymMatrix};

/// Row `(1, up, up², …, up^degree)` of the polynomial design matrix.
pub fn design_row(up: f64, degree: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(degree + 1);
    let mut v = 1.0;
    for _ in 0..=degree {
        row.push(v);
        v *= up;
    }
    row
}

/// Evaluates the polynomial with intercept-first coefficients at `up`.
pub fn eval_poly(coefficients: &[f64], up: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * up + c)
}

/// Row-major `n × (degree + 1)` design matrix.
pub fn design_matrix(up: &[f64], degree: usize) -> Vec<f64> {
    up.iter().flat_map(|&x| design_row(x, degree)).collect()
}

/// Least-squares fit of `us = Σ_k β_k up^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub degree: usize,
    pub n: usize,
    /// Intercept first; for degree 1 these are `C0` (km/s) and `S`.
    pub beta_hat: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Residual variance `SSE / nu`, (km/s)².
    pub s2: f64,
    /// Degrees of freedom `n − (degree + 1)`.
    pub nu: usize,
    pub xtx_inv: SymMatrix,
    /// `s² (XᵀX)⁻¹`.
    pub sigma_scale: SymMatrix,
    pub r2: f64,
    pub sse: f64,
}

impl FitResult {
    pub fn n_coefficients(&self) -> usize {
        self.degree + 1
    }

    pub fn predict(&self, up: f64) -> f64 {
        eval_poly(&self.beta_hat, up)
    }
}

/// Fits a polynomial Hugoniot of the given degree by Householder QR.
pub fn fit_least_squares(ds: &ShockDataset, degree: usize) -> Result<FitResult> {
    fit_xy(&ds.up(), &ds.us(), degree)
}

pub(crate) fn fit_xy(up: &[f64], us: &[f64], degree: usize) -> Result<FitResult> {
    if degree == 0 {
        return Err(Error::Domain("polynomial degree must be at least 1".into()));
    }
    let n = up.len();
    let p = degree + 1;
    if n < p + 1 {
        return Err(Error::TooFewPoints { needed: p + 1, have: n });
    }
    let mut distinct = up.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < p {
        return Err(Error::RankDeficient(format!(
            "{} distinct particle velocities for {p} coefficients",
            distinct.len()
        )));
    }
    let design = design_matrix(up, degree);
    let sol = least_squares_qr(&design, n, p, us)?;
    let beta_hat = sol.coefficients.clone();
    let residuals: Vec<f64> = up.iter().zip(us).map(|(&x, &y)| y - eval_poly(&beta_hat, x)).collect();
    let mut sse: f64 = residuals.iter().map(|r| r * r).sum();
    // residuals at rounding level mean the data lie exactly on the curve
    let ymax = us.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    if sse <= n as f64 * (16.0 * f64::EPSILON * ymax).powi(2) {
        sse = 0.0;
    }
    let nu = n - p;
    let s2 = sse / nu as f64;
    let ybar = us.iter().sum::<f64>() / n as f64;
    let sst: f64 = us.iter().map(|y| (y - ybar).powi(2)).sum();
    let r2 = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else { 1.0 };
    let xtx_inv = sol.xtx_inverse();
    let sigma_scale = xtx_inv.scaled(s2);
    Ok(FitResult {
        degree,
        n,
        beta_hat,
        residuals,
        s2,
        nu,
        xtx_inv,
        sigma_scale,
        r2,
        sse,
    })
}

/// `(XᵀX)⁻¹` for the straight-line model from centered sums:
/// `(1 / Σ(xᵢ − x̄)²) · [[Σxᵢ²/n, −x̄], [−x̄, 1]]`.
pub fn xtx_inverse_closed_form(ds: &ShockDataset) -> Result<SymMatrix> {
    xtx_inverse_closed_form_from_up(&ds.up())
}

/// Same as [`xtx_inverse_closed_form`] on raw abscissae (which need not be
/// physical particle velocities).
pub fn xtx_inverse_closed_form_from_up(up: &[f64]) -> Result<SymMatrix> {
    let n = up.len() as f64;
    let mean = up.iter().sum::<f64>() / n;
    let sxx: f64 = up.iter().map(|x| (x - mean).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateDesign("all particle velocities are equal".into()));
    }
    let sum_sq: f64 = up.iter().map(|x| x * x).sum();
    Ok(SymMatrix::from_upper_fn(2, |i, j| match (i, j) {
        (0, 0) => sum_sq / n / sxx,
        (1, 1) => 1.0 / sxx,
        _ => -mean / sxx,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(up: &[f64], us: &[f64]) -> ShockDataset {
        ShockDataset::from_velocities("t", up, us).unwrap()
    }

    #[test]
    fn perfect_line() {
        let fit = fit_least_squares(&ds(&[0.0, 1.0, 2.0], &[2.0, 3.5, 5.0]), 1).unwrap();
        assert!((fit.beta_hat[0] - 2.0).abs() < 1e-14);
        assert!((fit.beta_hat[1] - 1.5).abs() < 1e-14);
        assert_eq!(fit.s2, 0.0);
        assert_eq!(fit.r2, 1.0);
        assert_eq!(fit.nu, 1);
    }

    #[test]
    fn closed_form_inverse_on_small_designs() {
        let d = ds(&[0.0, 1.0, 2.0], &[1.0, 2.0, 4.0]);
        let m = xtx_inverse_closed_form(&d).unwrap();
        assert!((m.get(0, 0) - 5.0 / 6.0).abs() < 1e-15);
        assert!((m.get(0, 1) + 0.5).abs() < 1e-15);
        assert!((m.get(1, 1) - 0.5).abs() < 1e-15);
        let solver = fit_least_squares(&d, 1).unwrap().xtx_inv;
        for (a, b) in m.entries().iter().zip(solver.entries()) {
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300));
        }
        assert!(m.get(0, 1) < 0.0);
        // centred design: the intercept and slope decouple
        let c = xtx_inverse_closed_form_from_up(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.get(0, 1), 0.0);
        assert_eq!(c.get(1, 0), 0.0);
        assert!(matches!(
            xtx_inverse_closed_form_from_up(&[2.0, 2.0, 2.0]),
            Err(Error::DegenerateDesign(_))
        ));
    }

    #[test]
    fn too_few_points_and_rank() {
        let d = ds(&[0.0, 1.0, 2.0], &[1.0, 2.0, 4.0]);
        assert!(matches!(fit_least_squares(&d, 2), Err(Error::TooFewPoints { needed: 4, have: 3 })));
        let d = ds(&[1.0, 1.0, 2.0, 2.0], &[1.0, 2.0, 4.0, 5.0]);
        assert!(matches!(fit_least_squares(&d, 2), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn residuals_sum_to_zero_and_cubic_recovers_polynomial() {
        let up: Vec<f64> = (0..12).map(|i| 0.3 * i as f64).collect();
        let us: Vec<f64> = up.iter().map(|x| 4.0 + 1.4 * x - 0.05 * x * x + 0.01 * x * x * x).collect();
        let fit = fit_least_squares(&ds(&up, &us), 3).unwrap();
        for (b, e) in fit.beta_hat.iter().zip([4.0, 1.4, -0.05, 0.01]) {
            assert!((b - e).abs() < 1e-10, "{b} vs {e}");
        }
        let noisy: Vec<f64> = us.iter().enumerate().map(|(i, y)| y + if i % 2 == 0 { 0.01 } else { -0.013 }).collect();
        let fit = fit_least_squares(&ds(&up, &noisy), 1).unwrap();
        let sum: f64 = fit.residuals.iter().sum();
        assert!(sum.abs() < 1e-9 * 12.0 * 8.0);
        assert!(fit.r2 > 0.0 && fit.r2 < 1.0);
        for (a, b) in fit.sigma_scale.entries().iter().zip(fit.xtx_inv.entries()) {
            assert!((a - fit.s2 * b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn horner_matches_design_row() {
        let c = [1.0, -2.0, 0.5, 0.25];
        let x: f64 = 1.7;
        let direct: f64 = design_row(x, 3).iter().zip(&c).map(|(a, b)| a * b).sum();
        assert!((eval_poly(&c, x) - direct).abs() < 1e-14);
    }
}
