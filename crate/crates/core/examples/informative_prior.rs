//! Conjugate normal-inverse-gamma prior: how the posterior moves from the
//! prior toward the flat-prior answer as the prior widens.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::regression::{posterior_from_data, posterior_informative, prior_marginal, NIGPrior};

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let flat = posterior_from_data(&ds, 1)?;
    println!("flat prior:     C0 = {:.5}, S = {:.5}", flat.beta_mean[0], flat.beta_mean[1]);

    for widen in [0.1, 1.0, 10.0, 1000.0] {
        let prior = NIGPrior::from_correlation([3.8, 1.6], [0.05 * widen, 0.02 * widen], -0.6, 3.0, 0.002)?;
        let pm = prior_marginal(&prior);
        let post = posterior_informative(&ds, &prior)?;
        let sd: Vec<f64> = post.marginal_beta().covariance()?.diag().iter().map(|v| v.sqrt()).collect();
        println!(
            "prior sd ×{widen:<6} prior mean ({:.2}, {:.2}) → C0 = {:.5} ± {:.5}, S = {:.5} ± {:.5}, ν = {}",
            pm.mean[0], pm.mean[1], post.beta_mean[0], sd[0], post.beta_mean[1], sd[1], post.nu
        );
    }
    Ok(())
}
