//! Pairs bootstrap of the Hugoniot fit, and the effect of dropping the
//! point with the largest particle velocity.

use hugoniot_bayes::bootstrap::{bootstrap_ensemble, bootstrap_table, sensitivity_drop_max_up, skewness};
use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::stats::rng::RngState;

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let rng = RngState::new(0);

    let ens = bootstrap_ensemble(&ds, 1, 20_000, &rng)?;
    println!("B = {}, rank-deficient redraws = {}", ens.resamples, ens.redraws);
    for row in bootstrap_table(ds.material(), &ens, 0.95)? {
        println!("{:>3}: mean {:.4}, sd {:.4}, 95% ({:.4}, {:.4})", row.parameter, row.mean, row.sd, row.lo, row.hi);
    }
    println!("skewness of S: {:.3}", skewness(&ens, 1));

    let sens = sensitivity_drop_max_up(&ds, 1, 20_000, 20_000, &rng.substream("sensitivity"))?;
    let sd = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    };
    println!("\ndropping point {} (up = {} km/s):", sens.dropped_index, sens.dropped_up);
    for (label, arm) in [("all points", &sens.full), ("dropped", &sens.dropped)] {
        println!(
            "  {label:>10}: bootstrap sd(S) = {:.5}, posterior sd(S) = {:.5}",
            arm.bootstrap[1].sd,
            sd(&arm.posterior_draws.column(1))
        );
    }
    Ok(())
}
