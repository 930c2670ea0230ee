//! Exact samplers for the normal, gamma, chi-square and inverse-gamma laws.

use super::rng::{RngState, Stream};

/// One standard normal deviate (Box–Muller; the second deviate of each pair
/// is cached on the stream).
pub fn std_normal(st: &mut Stream) -> f64 {
    if let Some(v) = st.take_spare() {
        return v;
    }
    let u1 = st.uniform();
    let u2 = st.uniform();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    st.put_spare(r * s);
    r * c
}

/// `k` i.i.d. standard normal draws starting at `rng`.
pub fn sample_std_normal(rng: &RngState, k: usize) -> Vec<f64> {
    let mut st = rng.stream();
    (0..k).map(|_| std_normal(&mut st)).collect()
}

/// Gamma(shape, 1) draw.
///
/// Marsaglia–Tsang squeeze/rejection for `shape >= 1`; smaller shapes use
/// `Gamma(shape + 1) · U^(1/shape)`.
pub fn gamma(st: &mut Stream, shape: f64) -> f64 {
    assert!(shape > 0.0, "gamma shape must be positive");
    if shape < 1.0 {
        let g = gamma(st, shape + 1.0);
        let u = st.uniform();
        return g * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = std_normal(st);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = st.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Chi-square draw with `nu` degrees of freedom, as `2 · Gamma(nu/2)`.
pub fn chi_square(st: &mut Stream, nu: f64) -> f64 {
    2.0 * gamma(st, 0.5 * nu)
}

/// Inverse-gamma draw with shape `a` and scale `b`: `b / Gamma(a, 1)`.
pub fn inverse_gamma(st: &mut Stream, a: f64, b: f64) -> f64 {
    b / gamma(st, a)
}

pub fn sample_chi_square(rng: &RngState, nu: f64) -> f64 {
    chi_square(&mut rng.stream(), nu)
}

pub fn sample_inverse_gamma(rng: &RngState, a: f64, b: f64) -> f64 {
    inverse_gamma(&mut rng.stream(), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn normal_moments_and_determinism() {
        let rng = RngState::new(11);
        let z = sample_std_normal(&rng, 1_000_000);
        let (mean, var) = moments(&z);
        assert!(mean.abs() < 4.0 / 1000.0, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
        assert_eq!(sample_std_normal(&rng, 50), z[..50].to_vec());
    }

    #[test]
    fn chi_square_moments() {
        let mut st = RngState::new(5).stream();
        let w: Vec<f64> = (0..1_000_000).map(|_| chi_square(&mut st, 5.0)).collect();
        assert!(w.iter().all(|&x| x > 0.0));
        let (mean, var) = moments(&w);
        assert!((mean - 5.0).abs() < 0.05, "mean {mean}");
        assert!((var - 10.0).abs() < 0.3, "var {var}");
    }

    #[test]
    fn small_shape_gamma_mean() {
        // nu = 1 gives shape 1/2, the boosted branch
        let mut st = RngState::new(8).stream();
        let w: Vec<f64> = (0..400_000).map(|_| chi_square(&mut st, 1.0)).collect();
        let (mean, var) = moments(&w);
        assert!(w.iter().all(|&x| x > 0.0));
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!((var - 2.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn inverse_gamma_moments() {
        let mut st = RngState::new(13).stream();
        let s: Vec<f64> = (0..1_000_000).map(|_| inverse_gamma(&mut st, 5.0, 8.0)).collect();
        assert!(s.iter().all(|&x| x > 0.0));
        let (mean, var) = moments(&s);
        assert!((mean - 2.0).abs() < 0.02, "mean {mean}");
        assert!((var - 64.0 / 48.0).abs() < 0.05 * 64.0 / 48.0, "var {var}");
    }
}
