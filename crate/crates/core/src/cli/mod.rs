//! Command-line front end: one subcommand per analysis, all outputs written
//! to a single directory with a digest manifest.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};

pub use commands::Context;
pub use config::{Flags, Format, PriorSpec, RunConfig};
pub use output::{read_columns, sha256_hex, OutputSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Least-squares fit and residuals
    Fit,
    /// Posterior table, moments and joint credible region
    Posterior,
    /// Draws of the coefficients from the posterior
    Sample,
    /// Pressure-volume band from posterior Hugoniot curves
    Hugoniot,
    /// Mean shock-velocity and prediction bands
    Bands,
    /// Posterior predictive check
    Ppc,
    /// Pairs bootstrap table, ensemble and bands
    Bootstrap,
    /// Grid-evaluated posterior compared with the closed form
    Validate,
    /// Everything above in one directory
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fit => "fit",
            Command::Posterior => "posterior",
            Command::Sample => "sample",
            Command::Hugoniot => "hugoniot",
            Command::Bands => "bands",
            Command::Ppc => "ppc",
            Command::Bootstrap => "bootstrap",
            Command::Validate => "validate",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hugoniot-bayes", version, about = "Bayesian calibration of linear shock Hugoniot fits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Runs one subcommand and returns the files it produced, without writing.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<OutputSet> {
    let ctx = Context::new(cfg.clone())?;
    let mut out = OutputSet::default();
    commands::dataset_info(&ctx, &mut out);
    let run = |out: &mut OutputSet| match command {
        Command::Fit => commands::fit(&ctx, out),
        Command::Posterior => commands::posterior(&ctx, out),
        Command::Sample => commands::sample(&ctx, out),
        Command::Hugoniot => commands::hugoniot(&ctx, out),
        Command::Bands => commands::bands(&ctx, out),
        Command::Ppc => commands::ppc(&ctx, out),
        Command::Bootstrap => commands::bootstrap(&ctx, out),
        Command::Validate => commands::validate(&ctx, out),
        Command::Report => commands::report(&ctx, out),
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run(&mut out)),
        None => run(&mut out),
    }?;
    Ok(out)
}

/// Config echo stored in the manifest; loading it back with `--config`
/// reproduces the run.
pub fn config_echo(command: Command, cfg: &RunConfig) -> serde_json::Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v["command"] = command.name().into();
    v
}

/// Runs a subcommand and writes its files and manifest to `cfg.out_dir`.
pub fn run(command: Command, cfg: &RunConfig) -> Result<OutputSet> {
    let out = execute(command, cfg)?;
    out.write_all(&cfg.out_dir, &config_echo(command, cfg))?;
    Ok(out)
}

/// Machine-readable failure record printed to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: String,
    pub class: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let class = e.class();
        ErrorRecord {
            error: e.kind().into(),
            class: match class {
                crate::ErrorClass::Config => "config",
                crate::ErrorClass::Data => "data",
                crate::ErrorClass::Numerical => "numerical",
            },
            message: e.to_string(),
            exit_code: class.exit_code(),
        }
    }
}

fn fail(rec: ErrorRecord) -> i32 {
    eprintln!("{}", serde_json::to_string(&rec).expect("record serializes"));
    rec.exit_code
}

/// Parses `args` (including the program name), runs, and returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            return fail(ErrorRecord {
                error: "ConfigError".into(),
                class: "config",
                message: e.to_string().trim().to_string(),
                exit_code: crate::ErrorClass::Config.exit_code(),
            });
        }
    };
    let result = cli.flags.resolve().and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(_) => 0,
        Err(e) => fail(ErrorRecord::from(&e)),
    }
}
