use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::linalg::{sym_eig_2x2, SymMatrix};
use crate::stats::special::f_quantile;

/// Two-dimensional elliptical credible region
/// `{β : (β − c)ᵀ Σ⁻¹ (β − c) ≤ 2 F_{level, 2, ν}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CredibleEllipse {
    pub center: [f64; 2],
    /// Semi-axis lengths `√(2 λᵢ F)`, major first.
    pub semi_axes: [f64; 2],
    /// Columns are the axis directions (row-major storage).
    pub orientation: [[f64; 2]; 2],
    pub level: f64,
    /// The bound `2 F_{level, 2, ν}` on the quadratic form.
    pub threshold: f64,
    scale_inv: [[f64; 2]; 2],
}

impl CredibleEllipse {
    pub fn new(center: &[f64], scale: &SymMatrix, nu: f64, level: f64) -> Result<Self> {
        if scale.dim() != 2 || center.len() != 2 {
            return Err(Error::UnsupportedDegree(scale.dim().saturating_sub(1)));
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
        }
        let threshold = 2.0 * f_quantile(level, 2, nu)?;
        let eig = sym_eig_2x2(scale)?;
        if !(eig.lambda2 > 0.0) {
            return Err(Error::NotPositiveDefinite {
                row: 1,
                pivot: eig.lambda2,
            });
        }
        let inv = scale.inverse()?;
        Ok(CredibleEllipse {
            center: [center[0], center[1]],
            semi_axes: [(threshold * eig.lambda1).sqrt(), (threshold * eig.lambda2).sqrt()],
            orientation: eig.vectors,
            level,
            threshold,
            scale_inv: [[inv.get(0, 0), inv.get(0, 1)], [inv.get(1, 0), inv.get(1, 1)]],
        })
    }

    /// `(β − c)ᵀ Σ⁻¹ (β − c)`.
    pub fn quad_form(&self, beta: [f64; 2]) -> f64 {
        let d = [beta[0] - self.center[0], beta[1] - self.center[1]];
        let m = &self.scale_inv;
        d[0] * (m[0][0] * d[0] + m[0][1] * d[1]) + d[1] * (m[1][0] * d[0] + m[1][1] * d[1])
    }

    pub fn contains(&self, beta: [f64; 2]) -> bool {
        self.quad_form(beta) <= self.threshold
    }

    /// `count` points evenly spaced in angle around the boundary.
    pub fn boundary(&self, count: usize) -> Vec<[f64; 2]> {
        let u = &self.orientation;
        (0..count)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / count as f64;
                let (s, c) = theta.sin_cos();
                let e1 = self.semi_axes[0] * c;
                let e2 = self.semi_axes[1] * s;
                [
                    self.center[0] + u[0][0] * e1 + u[0][1] * e2,
                    self.center[1] + u[1][0] * e1 + u[1][1] * e2,
                ]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_scale_gives_circle() {
        let e = CredibleEllipse::new(&[1.0, 2.0], &SymMatrix::identity(2), 10.0, 0.95).unwrap();
        let r = (2.0 * f_quantile(0.95, 2, 10.0).unwrap()).sqrt();
        assert!((e.semi_axes[0] - r).abs() < 1e-12 && (e.semi_axes[1] - r).abs() < 1e-12);
        for p in e.boundary(32) {
            let d = ((p[0] - 1.0).powi(2) + (p[1] - 2.0).powi(2)).sqrt();
            assert!((d - r).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_on_quadratic_form() {
        let scale = SymMatrix::from_rows(&[vec![1.2e-4, -7.0e-5], vec![-7.0e-5, 4.9e-5]]).unwrap();
        let e = CredibleEllipse::new(&[3.9, 1.5], &scale, 142.0, 0.95).unwrap();
        for p in e.boundary(64) {
            assert!((e.quad_form(p) - e.threshold).abs() <= 1e-9 * e.threshold);
        }
        assert!(e.contains([3.9, 1.5]));
        assert!(e.semi_axes[0] >= e.semi_axes[1]);
    }

    #[test]
    fn wrong_dimension() {
        let err = CredibleEllipse::new(&[0.0; 3], &SymMatrix::identity(3), 5.0, 0.9).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDegree(2)));
    }
}
