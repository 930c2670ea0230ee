//! Evaluates the flat-prior posterior on a 3-D grid over (C0, S, σ²) and
//! compares its moments with the closed form.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::regression::fit_least_squares;
use hugoniot_bayes::validation::{grid_posterior_oracle, GridSpec};

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let fit = fit_least_squares(&ds, 1)?;

    for (label, grid) in [
        ("around fit, 61³", GridSpec::around_fit(&fit, 61, 8.0)?),
        ("heavy tailed, 61³", GridSpec::heavy_tailed(&fit, 61, 1e-10)?),
    ] {
        let oracle = grid_posterior_oracle(&ds, 1, &grid)?;
        println!("{label}: boundary mass {:.2e}", oracle.boundary_mass);
        for p in &oracle.parameters {
            println!(
                "  {:>6}: mean {:.6e} vs {:.6e}, sd {:.4e} vs {:.4e}, rel err {:.1e}",
                p.parameter,
                p.grid_mean,
                p.closed_form_mean.unwrap_or(f64::NAN),
                p.grid_sd,
                p.closed_form_sd.unwrap_or(f64::NAN),
                p.rel_err.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
