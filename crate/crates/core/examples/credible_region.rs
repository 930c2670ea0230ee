//! Joint credible ellipse for (C0, S) and a Monte Carlo check of its
//! coverage under the posterior.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::regression::{credible_region_ellipse, posterior_from_data, sample_beta};
use hugoniot_bayes::stats::rng::RngState;

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let post = posterior_from_data(&ds, 1)?;

    for level in [0.5, 0.9, 0.95, 0.99] {
        let ell = credible_region_ellipse(&post, level)?;
        let draws = sample_beta(&post, 20_000, &RngState::new(7))?;
        let inside = draws.rows().filter(|b| ell.contains([b[0], b[1]])).count() as f64 / draws.len() as f64;
        println!(
            "level {level:.2}: semi-axes ({:.4}, {:.5}), angle {:.4} rad, fraction of draws inside {inside:.4}",
            ell.semi_axes[0],
            ell.semi_axes[1],
            ell.orientation[1][0].atan2(ell.orientation[0][0])
        );
    }

    let ell = credible_region_ellipse(&post, 0.95)?;
    println!("\nc0,s");
    for p in ell.boundary(12) {
        println!("{:.5},{:.5}", p[0], p[1]);
    }
    Ok(())
}
