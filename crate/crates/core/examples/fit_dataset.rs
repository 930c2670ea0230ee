//! Loads a measurement file and prints the least-squares Hugoniot fit.
//!
//!     cargo run --example fit_dataset -- [data.csv]

use hugoniot_bayes::dataset::{load_dataset_file, summarize};
use hugoniot_bayes::regression::{fit_least_squares, parameter_names};

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let s = summarize(&ds);
    println!("{}: n = {}, up in [{}, {}] km/s", s.material, s.n, s.up_range.0, s.up_range.1);

    for degree in [1, 2] {
        let fit = fit_least_squares(&ds, degree)?;
        println!("degree {degree}: R² = {:.6}, s² = {:.3e}, ν = {}", fit.r2, fit.s2, fit.nu);
        for (name, (b, v)) in parameter_names(degree).iter().zip(fit.beta_hat.iter().zip(fit.sigma_scale.diag())) {
            println!("  {name:>3} = {b:.5} ± {:.5}", v.sqrt());
        }
    }
    Ok(())
}
