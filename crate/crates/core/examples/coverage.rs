//! Frequentist coverage of the flat-prior credible intervals and joint
//! region on simulated straight-line data.

use hugoniot_bayes::stats::rng::RngState;
use hugoniot_bayes::validation::coverage_experiment;

fn main() -> hugoniot_bayes::Result<()> {
    let up: Vec<f64> = (0..12).map(|i| 0.3 + 0.2 * i as f64).collect();
    for level in [0.68, 0.9, 0.95] {
        let res = coverage_experiment(&[3.9, 1.5], 0.03f64.powi(2), &up, level, 5000, &RngState::new(5))?;
        println!(
            "level {level:.2}: C0 {:.4}, S {:.4}, joint {:.4}",
            res.per_coefficient[0],
            res.per_coefficient[1],
            res.region.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
