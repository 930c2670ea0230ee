//! Propagates posterior coefficient draws through the Rankine-Hugoniot jump
//! conditions and prints the pressure-volume band.

use hugoniot_bayes::dataset::load_dataset_file;
use hugoniot_bayes::hugoniot::{default_up_grid, posterior_pv_band, resolve_rho0, rh_transform, InitialState, DEFAULT_P0_GPA};
use hugoniot_bayes::regression::posterior_from_data;
use hugoniot_bayes::stats::rng::RngState;

fn main() -> hugoniot_bayes::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into());
    let ds = load_dataset_file(&path, None)?;
    let post = posterior_from_data(&ds, 1)?;
    let init = InitialState::new(resolve_rho0(None, &ds)?, DEFAULT_P0_GPA, Some(0.0))?;
    let grid = default_up_grid(&ds, 200);

    let mean = rh_transform(&post.beta_mean, &grid, &init)?;
    let last = mean.len() - 1;
    println!(
        "posterior-mean curve ends at V = {:.4} cm³/g, P = {:.1} GPa, E = {:.2} kJ/g",
        mean.v[last],
        mean.p[last],
        mean.e.as_ref().map_or(f64::NAN, |e| e[last])
    );

    let res = posterior_pv_band(&post, 20_000, &grid, &init, 0.95, 12, &RngState::new(3))?;
    println!("{} curves drawn, {} rejected as unphysical", res.drawn, res.rejected);
    println!("v_cm3_g,p_lo_gpa,p_hi_gpa");
    let b = &res.band;
    for i in 0..b.v_grid.len() {
        println!("{:.5},{:.3},{:.3}", b.v_grid[i], b.p_lo[i], b.p_hi[i]);
    }
    Ok(())
}
