//! Pointwise 95% bands for the mean shock velocity and for a new
//! measurement.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::hugoniot::default_up_grid;
use hugoniot_bayes::regression::{band, posterior_from_data, BandKind};

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let post = posterior_from_data(&ds, 1)?;
    let grid = default_up_grid(&ds, 9);
    let cred = band(&post, &grid, 0.95, BandKind::Credible)?;
    let pred = band(&post, &grid, 0.95, BandKind::Prediction)?;

    println!("   up    mean   credible width   prediction width");
    for i in 0..grid.len() {
        println!(
            "{:5.2} {:7.4} {:16.5} {:18.5}",
            grid[i],
            cred.mean[i],
            cred.hi[i] - cred.lo[i],
            pred.hi[i] - pred.lo[i]
        );
    }
    Ok(())
}
