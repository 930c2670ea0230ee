//! Distributional checks on the samplers against independent CDFs.

use hugoniot_bayes::dataset::ShockDataset;
use hugoniot_bayes::regression::{posterior_from_data, sample_beta, sample_joint, PosteriorNIG};
use hugoniot_bayes::stats::rng::RngState;
use hugoniot_bayes::stats::special::{f_cdf, ln_gamma, student_t_cdf, student_t_quantile};
use hugoniot_bayes::validation::grid::inverse_gamma_cdf;

fn posterior(n: usize) -> PosteriorNIG {
    let up: Vec<f64> = (0..n).map(|i| 0.2 + 0.3 * i as f64).collect();
    let us: Vec<f64> = up
        .iter()
        .enumerate()
        .map(|(i, x)| 4.0 + 1.4 * x + 0.05 * ((i * 7 % 5) as f64 - 2.0))
        .collect();
    posterior_from_data(&ShockDataset::from_velocities("s", &up, &us).unwrap(), 1).unwrap()
}

fn ks(xs: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

// 99.9% point of the KS statistic is about 1.95/√n.
fn ks_limit(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

#[test]
fn quadratic_form_is_f_distributed() {
    for n in [6, 19] {
        let post = posterior(n);
        let inv = post.scale.inverse().unwrap();
        let draws = sample_beta(&post, 100_000, &RngState::new(n as u64)).unwrap();
        let mut q: Vec<f64> = draws
            .rows()
            .map(|b| inv.quad_form(&[b[0] - post.beta_mean[0], b[1] - post.beta_mean[1]]) / 2.0)
            .collect();
        let d = ks(&mut q, |x| f_cdf(x, 2.0, post.nu));
        assert!(d < ks_limit(q.len()), "n = {n}: KS {d}");
    }
}

#[test]
fn coordinates_are_t_distributed() {
    let post = posterior(8);
    let draws = sample_beta(&post, 50_000, &RngState::new(3)).unwrap();
    for k in 0..2 {
        let sd = post.scale.get(k, k).sqrt();
        let mut z: Vec<f64> = draws.column(k).iter().map(|b| (b - post.beta_mean[k]) / sd).collect();
        let d = ks(&mut z, |x| student_t_cdf(x, post.nu));
        assert!(d < ks_limit(z.len()), "coefficient {k}: KS {d}");
    }
}

#[test]
fn joint_draws_have_the_right_marginals() {
    let post = posterior(10);
    let joint = sample_joint(&post, 50_000, &RngState::new(4)).unwrap();
    let mut s2: Vec<f64> = joint.iter().map(|d| d.sigma2).collect();
    let d = ks(&mut s2, |x| inverse_gamma_cdf(post.ig_shape, post.ig_scale, x));
    assert!(d < ks_limit(joint.len()), "sigma2 KS {d}");
    let sd = post.scale.get(1, 1).sqrt();
    let mut z: Vec<f64> = joint.iter().map(|d| (d.beta[1] - post.beta_mean[1]) / sd).collect();
    let d = ks(&mut z, |x| student_t_cdf(x, post.nu));
    assert!(d < ks_limit(joint.len()), "slope KS {d}");
}

/// Student t density integrated by composite Simpson from 0 to `x`.
fn t_cdf_by_quadrature(x: f64, nu: f64) -> f64 {
    let ln_c = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (nu * std::f64::consts::PI).ln();
    let f = |t: f64| (ln_c - (nu + 1.0) / 2.0 * (1.0 + t * t / nu).ln()).exp();
    let m = 20_000;
    let h = x / m as f64;
    let mut s = f(0.0) + f(x);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    0.5 + s * h / 3.0
}

#[test]
fn t_quantiles_agree_with_quadrature() {
    for nu in [1.0, 2.5, 5.0, 10.0, 30.0, 100.0, 1000.0] {
        for p in [0.6, 0.9, 0.975, 0.995] {
            let q = student_t_quantile(p, nu).unwrap();
            let back = t_cdf_by_quadrature(q, nu);
            assert!((back - p).abs() < 1e-9, "nu {nu}, p {p}: {back}");
        }
    }
}
