//! Draws from the marginal t posterior of the coefficients and compares the
//! sample moments with the closed form.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::regression::{beta_covariance, posterior_from_data, sample_beta, sample_joint};
use hugoniot_bayes::stats::rng::RngState;

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let post = posterior_from_data(&ds, 1)?;
    let rng = RngState::new(42);

    let draws = sample_beta(&post, 100_000, &rng)?;
    let (m, c) = (draws.mean(), draws.covariance());
    let exact = beta_covariance(&post)?;
    println!("            closed form     sample");
    println!("mean C0   {:>12.6} {:>12.6}", post.beta_mean[0], m[0]);
    println!("mean S    {:>12.6} {:>12.6}", post.beta_mean[1], m[1]);
    println!("var C0    {:>12.4e} {:>12.4e}", exact.get(0, 0), c.get(0, 0));
    println!("var S     {:>12.4e} {:>12.4e}", exact.get(1, 1), c.get(1, 1));
    println!("cov       {:>12.4e} {:>12.4e}", exact.get(0, 1), c.get(0, 1));

    let joint = sample_joint(&post, 5, &rng.substream("joint"))?;
    println!("\njoint draws (C0, S, σ²):");
    for d in joint {
        println!("  {:.5} {:.5} {:.3e}", d.beta[0], d.beta[1], d.sigma2);
    }
    Ok(())
}
