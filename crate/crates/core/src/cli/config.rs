use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::posterior::NIGPrior;
use crate::stats::linalg::SymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Conjugate prior as written in a JSON file: either a full scale matrix or
/// (for the straight line) standard deviations plus a correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriorSpec {
    Matrix {
        beta0: Vec<f64>,
        sigma0: Vec<Vec<f64>>,
        a0: f64,
        b0: f64,
    },
    Correlation {
        beta0: [f64; 2],
        sd: [f64; 2],
        corr: f64,
        a0: f64,
        b0: f64,
    },
    /// Path to a JSON file holding one of the forms above.
    File(PathBuf),
}

impl PriorSpec {
    pub fn resolve(&self) -> Result<NIGPrior> {
        match self {
            PriorSpec::Matrix { beta0, sigma0, a0, b0 } => {
                let m = SymMatrix::from_rows(sigma0).map_err(|e| Error::Config(format!("prior sigma0: {e}")))?;
                NIGPrior::new(beta0.clone(), m, *a0, *b0).map_err(|e| Error::Config(format!("prior: {e}")))
            }
            PriorSpec::Correlation { beta0, sd, corr, a0, b0 } => {
                NIGPrior::from_correlation(*beta0, *sd, *corr, *a0, *b0).map_err(|e| Error::Config(format!("prior: {e}")))
            }
            PriorSpec::File(path) => read_prior(path)?.resolve(),
        }
    }
}

pub fn read_prior(path: &Path) -> Result<PriorSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec: PriorSpec =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("prior file {}: {e}", path.display())))?;
    if matches!(spec, PriorSpec::File(_)) {
        return Err(Error::Config(format!("prior file {} must hold a prior, not a path", path.display())));
    }
    Ok(spec)
}

/// Every setting of a run. Serialized into the manifest, minus the output
/// directory and thread count, which do not affect results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub material: Option<String>,
    pub degree: usize,
    pub seed: u64,
    pub samples: usize,
    pub resamples: usize,
    pub replicates: usize,
    pub level: f64,
    pub rho0: Option<f64>,
    pub p0: f64,
    pub e0: Option<f64>,
    pub up_grid: usize,
    pub v_grid: usize,
    pub grid_points: usize,
    pub prior: Option<PriorSpec>,
    #[serde(skip_serializing)]
    pub out_dir: PathBuf,
    pub format: Format,
    pub dedupe: bool,
    pub drop_max_up: bool,
    pub emit_svg: bool,
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: None,
            material: None,
            degree: 1,
            seed: 0,
            samples: 100_000,
            resamples: 100_000,
            replicates: 20,
            level: 0.95,
            rho0: None,
            p0: 1e-4,
            e0: None,
            up_grid: 200,
            v_grid: 200,
            grid_points: 101,
            prior: None,
            out_dir: PathBuf::from("out"),
            format: Format::Csv,
            dedupe: false,
            drop_max_up: false,
            emit_svg: false,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.data.is_none() {
            return bad("no dataset given: pass --data <file.csv>".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("--level must lie in (0, 1), got {}", self.level));
        }
        if self.degree < 1 {
            return bad("--degree must be at least 1".into());
        }
        if self.samples < 1 || self.resamples < 1 || self.replicates < 1 {
            return bad("--samples, --resamples and --replicates must be at least 1".into());
        }
        if self.up_grid < 2 || self.v_grid < 2 {
            return bad("grid sizes must be at least 2".into());
        }
        if self.grid_points < 11 {
            return bad("--grid-points must be at least 11".into());
        }
        if let Some(r) = self.rho0 {
            if !(r > 0.0) {
                return bad(format!("--rho0 must be positive, got {r}"));
            }
        }
        if !(self.p0 >= 0.0) {
            return bad(format!("--p0 must be non-negative, got {}", self.p0));
        }
        if self.threads == Some(0) {
            return bad("--threads must be at least 1".into());
        }
        Ok(())
    }

    /// Reads a JSON config file. A run manifest is accepted too, in which
    /// case its config echo is used.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let bad = |e: serde_json::Error| Error::Config(format!("config {}: {e}", path.display()));
        let mut v: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
        if v.get("files").is_some() {
            if let Some(c) = v.get("config") {
                v = c.clone();
            }
        }
        if let Some(obj) = v.as_object_mut() {
            obj.remove("command");
        }
        serde_json::from_value(v).map_err(bad)
    }
}

/// Long-form flags shared by every subcommand. Each one overrides the
/// config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Measurement CSV (`up_km_s,us_km_s[,rho0_g_cm3][,source]`)
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Material label (defaults to the file stem)
    #[arg(long, global = true)]
    pub material: Option<String>,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Posterior draws for sampling and pressure-volume bands
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Bootstrap resamples
    #[arg(long, global = true)]
    pub resamples: Option<usize>,
    /// Posterior predictive replicates
    #[arg(long, global = true)]
    pub replicates: Option<usize>,
    #[arg(long, global = true)]
    pub level: Option<f64>,
    /// Initial density, g/cm³ (defaults to the mean of the rho0 column)
    #[arg(long, global = true)]
    pub rho0: Option<f64>,
    /// Initial pressure, GPa
    #[arg(long, global = true)]
    pub p0: Option<f64>,
    /// Initial specific internal energy, kJ/g
    #[arg(long, global = true)]
    pub e0: Option<f64>,
    #[arg(long, global = true)]
    pub up_grid: Option<usize>,
    #[arg(long, global = true)]
    pub v_grid: Option<usize>,
    /// Points per axis of the validation grid
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// JSON file with a conjugate prior
    #[arg(long, global = true)]
    pub prior: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Remove exact duplicate (up, us) rows
    #[arg(long, global = true)]
    pub dedupe: bool,
    /// Run the drop-largest-up sensitivity comparison
    #[arg(long, global = true)]
    pub drop_max_up: bool,
    /// Also write SVG plots
    #[arg(long, global = true)]
    pub emit_svg: bool,
    /// Worker threads (results do not depend on it)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Flags {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        macro_rules! take_opt {
            ($($f:ident),*) => { $( if self.$f.is_some() { c.$f = self.$f.clone(); } )* };
        }
        take!(degree, seed, samples, resamples, replicates, level, p0, up_grid, v_grid, grid_points, out_dir, format);
        take_opt!(data, material, rho0, e0, threads);
        if let Some(p) = &self.prior {
            c.prior = Some(read_prior(p)?);
        }
        c.dedupe |= self.dedupe;
        c.drop_max_up |= self.drop_max_up;
        c.emit_svg |= self.emit_svg;
        c.validate()?;
        Ok(c)
    }
}
