//! Posterior formulas recomputed with nalgebra dense matrices.

use nalgebra::{DMatrix, DVector};

use hugoniot_bayes::dataset::ShockDataset;
use hugoniot_bayes::regression::{fit_least_squares, posterior_from_data, posterior_informative, NIGPrior};
use hugoniot_bayes::stats::linalg::SymMatrix;

fn data() -> ShockDataset {
    let up: Vec<f64> = (0..15).map(|i| 0.15 + 0.21 * i as f64).collect();
    let e = [0.02, -0.04, 0.01, 0.05, -0.03, 0.0, 0.03, -0.02, -0.05, 0.04, 0.01, -0.01, 0.02, -0.03, 0.01];
    let us: Vec<f64> = up.iter().zip(e).map(|(x, d)| 3.9 + 1.5 * x - 0.02 * x * x + d).collect();
    ShockDataset::from_velocities("oracle", &up, &us).unwrap()
}

fn design(ds: &ShockDataset, degree: usize) -> (DMatrix<f64>, DVector<f64>) {
    let up = ds.up();
    let x = DMatrix::from_fn(up.len(), degree + 1, |i, k| up[i].powi(k as i32));
    (x, DVector::from_vec(ds.us()))
}

fn to_na(m: &SymMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.get(i, j))
}

fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{what}: {a} vs {b}");
}

#[test]
fn flat_prior_matches_normal_equations() {
    let ds = data();
    for degree in 1..=3 {
        let (x, y) = design(&ds, degree);
        let xtx_inv = (x.transpose() * &x).try_inverse().unwrap();
        let beta = &xtx_inv * x.transpose() * &y;
        let r = &y - &x * &beta;
        let nu = (ds.len() - degree - 1) as f64;
        let s2 = r.dot(&r) / nu;

        let fit = fit_least_squares(&ds, degree).unwrap();
        let post = posterior_from_data(&ds, degree).unwrap();
        for k in 0..=degree {
            assert_close(fit.beta_hat[k], beta[k], 1e-9, "beta");
            assert_close(post.beta_mean[k], beta[k], 1e-9, "posterior mean");
            for j in 0..=degree {
                assert_close(post.scale.get(k, j), s2 * xtx_inv[(k, j)], 1e-8, "scale");
            }
        }
        assert_close(fit.s2, s2, 1e-9, "s2");
        assert_eq!(post.nu, nu);
        assert_close(post.ig_shape, nu / 2.0, 1e-15, "a");
        assert_close(post.ig_scale, nu * s2 / 2.0, 1e-9, "b");
    }
}

#[test]
fn conjugate_prior_matches_textbook_update() {
    let ds = data();
    let (x, y) = design(&ds, 1);
    let beta0 = DVector::from_vec(vec![3.7, 1.6]);
    let sigma0 = SymMatrix::from_rows(&[vec![0.09, -0.01], vec![-0.01, 0.0225]]).unwrap();
    let (a0, b0) = (2.5, 0.004);
    let prior = NIGPrior::new(beta0.iter().cloned().collect(), sigma0.clone(), a0, b0).unwrap();
    let post = posterior_informative(&ds, &prior).unwrap();

    let p0 = to_na(&sigma0).try_inverse().unwrap();
    let g = x.transpose() * &x + &p0;
    let g_inv = g.clone().try_inverse().unwrap();
    let mean = &g_inv * (x.transpose() * &y + &p0 * &beta0);
    let n = ds.len() as f64;
    let a = a0 + n / 2.0;
    let b = b0 + 0.5 * (y.dot(&y) + beta0.dot(&(&p0 * &beta0)) - mean.dot(&(&g * &mean)));

    for k in 0..2 {
        assert_close(post.beta_mean[k], mean[k], 1e-10, "mean");
        for j in 0..2 {
            assert_close(post.unit_scale.get(k, j), g_inv[(k, j)], 1e-10, "G inverse");
            assert_close(post.scale.get(k, j), b / a * g_inv[(k, j)], 1e-8, "scale");
        }
    }
    assert_close(post.ig_shape, a, 1e-15, "a");
    assert_close(post.ig_scale, b, 1e-8, "b");
    assert_eq!(post.nu, 2.0 * a);
}
