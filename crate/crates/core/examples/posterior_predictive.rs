//! Replicated datasets from the posterior predictive, compared with the
//! measurements.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::regression::posterior_from_data;
use hugoniot_bayes::stats::rng::RngState;
use hugoniot_bayes::validation::{posterior_predictive_check, prediction_band_coverage};

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let post = posterior_from_data(&ds, 1)?;

    let ppc = posterior_predictive_check(&post, &ds, 20, &RngState::new(11))?;
    println!("rep  corr(actual, simulated)  mean(simulated - actual)");
    for s in ppc.replicate_stats() {
        println!("{:3} {:24.5} {:25.5}", s.rep, s.correlation, s.mean_difference);
    }

    let cov = prediction_band_coverage(&post, &ds.up(), 0.95, 10_000, &RngState::new(12))?;
    println!("\nfuture measurements inside the 95% prediction band: {cov:.4}");
    Ok(())
}
