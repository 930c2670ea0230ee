//! Flat-prior posterior: coefficient table, σ² moments and the predictive
//! distribution at one particle velocity.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::regression::{
    mean_us_distribution, posterior_from_data, posterior_table, predictive_distribution, sigma2_posterior_summary,
};

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let post = posterior_from_data(&ds, 1)?;

    println!("parameter      mean        sd   95% interval");
    for row in posterior_table(ds.material(), &post, 0.95)? {
        println!("{:>9} {:>9.4} {:>9.4}   ({:.4}, {:.4}) {}", row.parameter, row.mean, row.sd, row.lo, row.hi, row.units);
    }

    let s2 = sigma2_posterior_summary(&post);
    match (&s2.mean, &s2.sd) {
        (Ok(m), Ok(sd)) => println!("σ²: mean {m:.3e}, sd {sd:.3e}"),
        (m, sd) => println!("σ²: mean {m:?}, sd {sd:?}"),
    }

    let up = 2.0;
    let mean = mean_us_distribution(&post, up).interval(0.95)?;
    let pred = predictive_distribution(&post, up).interval(0.95)?;
    println!("at up = {up} km/s: mean us in ({:.4}, {:.4}), new measurement in ({:.4}, {:.4})", mean.0, mean.1, pred.0, pred.1);
    Ok(())
}
