//! Runs the full report through the library entry point used by the
//! command-line tool and lists the files with their digests.
//!
//!     cargo run --example cli_report -- [out-dir]

use hugoniot_bayes::cli::{run, Command, RunConfig};

fn main() -> hugoniot_bayes::Result<()> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "report-demo".into());
    let cfg = RunConfig {
        data: Some(concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_synthetic.csv").into()),
        samples: 20_000,
        resamples: 20_000,
        emit_svg: true,
        drop_max_up: true,
        out_dir: out_dir.clone().into(),
        ..RunConfig::default()
    };
    cfg.validate()?;
    let out = run(Command::Report, &cfg)?;
    println!("wrote {out_dir}/manifest.json and:");
    for name in out.names() {
        println!("  {name:<28} {}", &hugoniot_bayes::cli::sha256_hex(out.get(name).unwrap_or_default())[..16]);
    }
    Ok(())
}
