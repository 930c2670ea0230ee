//! Shock-wave / particle-velocity datasets.
//!
//! The on-disk format is CSV with header `up_km_s,us_km_s[,rho0_g_cm3][,source]`,
//! UTF-8, LF or CRLF line endings, and `#` comment lines. Velocities are in
//! km/s and densities in g/cm³.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const UP_COLUMN: &str = "up_km_s";
pub const US_COLUMN: &str = "us_km_s";
pub const RHO0_COLUMN: &str = "rho0_g_cm3";
pub const SOURCE_COLUMN: &str = "source";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockPoint {
    /// Particle velocity, km/s.
    pub up: f64,
    /// Shock velocity, km/s.
    pub us: f64,
}

/// Validated set of (Up, Us) measurements for one material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockDataset {
    material: String,
    points: Vec<ShockPoint>,
    rho0: Option<Vec<f64>>,
    sources: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub material: String,
    pub n: usize,
    pub up_range: (f64, f64),
    pub us_range: (f64, f64),
    pub mean_rho0: Option<f64>,
    pub duplicate_count: usize,
}

impl ShockDataset {
    /// Builds and validates a dataset.
    pub fn new(
        material: impl Into<String>,
        points: Vec<ShockPoint>,
        rho0: Option<Vec<f64>>,
        sources: Option<Vec<String>>,
    ) -> Result<Self> {
        let ds = ShockDataset {
            material: material.into(),
            points,
            rho0,
            sources,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Convenience constructor from parallel velocity slices.
    pub fn from_velocities(material: impl Into<String>, up: &[f64], us: &[f64]) -> Result<Self> {
        if up.len() != us.len() {
            return Err(Error::Validation(format!(
                "{} particle velocities but {} shock velocities",
                up.len(),
                us.len()
            )));
        }
        let points = up.iter().zip(us).map(|(&up, &us)| ShockPoint { up, us }).collect();
        Self::new(material, points, None, None)
    }

    fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n < 3 {
            return Err(Error::Validation(format!("need at least 3 points, have {n}")));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !p.up.is_finite() || !p.us.is_finite() {
                return Err(Error::Validation(format!("point {i}: values must be finite")));
            }
            if p.up < 0.0 {
                return Err(Error::Validation(format!("point {i}: up = {} is negative", p.up)));
            }
            if p.us <= 0.0 {
                return Err(Error::Validation(format!("point {i}: us = {} is not positive", p.us)));
            }
        }
        let first = self.points[0].up;
        if self.points.iter().all(|p| p.up == first) {
            return Err(Error::Validation(
                "need at least two distinct particle velocities".into(),
            ));
        }
        if let Some(rho) = &self.rho0 {
            if rho.len() != n {
                return Err(Error::Validation(format!("{} densities for {n} points", rho.len())));
            }
            if let Some(i) = rho.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
                return Err(Error::Validation(format!("point {i}: rho0 = {} is not positive", rho[i])));
            }
        }
        if let Some(src) = &self.sources {
            if src.len() != n {
                return Err(Error::Validation(format!("{} source tags for {n} points", src.len())));
            }
        }
        Ok(())
    }

    pub fn material(&self) -> &str {
        &self.material
    }

    pub fn points(&self) -> &[ShockPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn up(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.up).collect()
    }

    pub fn us(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.us).collect()
    }

    pub fn rho0(&self) -> Option<&[f64]> {
        self.rho0.as_deref()
    }

    pub fn sources(&self) -> Option<&[String]> {
        self.sources.as_deref()
    }

    pub fn with_material(mut self, material: impl Into<String>) -> Self {
        self.material = material.into();
        self
    }

    /// Dataset restricted to the given row indices (in that order; repeats
    /// allowed). Validation is re-run.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        ShockDataset::new(
            self.material.clone(),
            indices.iter().map(|&i| self.points[i]).collect(),
            self.rho0.as_ref().map(|r| indices.iter().map(|&i| r[i]).collect()),
            self.sources.as_ref().map(|s| indices.iter().map(|&i| s[i].clone()).collect()),
        )
    }

    /// Dataset without row `index`.
    pub fn without(&self, index: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != index).collect();
        self.select(&keep)
    }

    /// Dataset with a row inserted at `index`.
    pub fn with_inserted(&self, index: usize, point: ShockPoint, rho0: Option<f64>, source: Option<String>) -> Result<Self> {
        let mut points = self.points.clone();
        points.insert(index, point);
        let rho = match (&self.rho0, rho0) {
            (Some(r), Some(v)) => {
                let mut r = r.clone();
                r.insert(index, v);
                Some(r)
            }
            (None, None) => None,
            _ => return Err(Error::Validation("density column presence mismatch".into())),
        };
        let src = match (&self.sources, source) {
            (Some(s), Some(v)) => {
                let mut s = s.clone();
                s.insert(index, v);
                Some(s)
            }
            (None, None) => None,
            _ => return Err(Error::Validation("source column presence mismatch".into())),
        };
        ShockDataset::new(self.material.clone(), points, rho, src)
    }

    /// Writes the dataset in the CSV format accepted by [`load_dataset`].
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![UP_COLUMN, US_COLUMN];
        if self.rho0.is_some() {
            header.push(RHO0_COLUMN);
        }
        if self.sources.is_some() {
            header.push(SOURCE_COLUMN);
        }
        w.write_record(&header).map_err(csv_io)?;
        for (i, p) in self.points.iter().enumerate() {
            let mut rec = vec![format_float(p.up), format_float(p.us)];
            if let Some(r) = &self.rho0 {
                rec.push(format_float(r[i]));
            }
            if let Some(s) = &self.sources {
                rec.push(s[i].clone());
            }
            w.write_record(&rec).map_err(csv_io)?;
        }
        w.flush().map_err(|e| Error::Io {
            path: "<writer>".into(),
            source: e,
        })?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Shortest round-tripping decimal representation.
pub(crate) fn format_float(v: f64) -> String {
    format!("{v:?}")
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io {
        path: "<writer>".into(),
        source: std::io::Error::new(std::io::ErrorKind::Other, e.to_string()),
    }
}

/// Parses and validates a dataset from CSV bytes.
pub fn load_dataset<R: Read>(source: R, material: &str) -> Result<ShockDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(source);
    let header = reader
        .headers()
        .map_err(|e| parse_error(&e, "header", e.to_string()))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    let (has_rho, has_source) = match names.as_slice() {
        [UP_COLUMN, US_COLUMN] => (false, false),
        [UP_COLUMN, US_COLUMN, RHO0_COLUMN] => (true, false),
        [UP_COLUMN, US_COLUMN, SOURCE_COLUMN] => (false, true),
        [UP_COLUMN, US_COLUMN, RHO0_COLUMN, SOURCE_COLUMN] => (true, true),
        _ => {
            return Err(Error::Parse {
                line: 1,
                column: "header".into(),
                message: format!(
                    "expected `{UP_COLUMN},{US_COLUMN}[,{RHO0_COLUMN}][,{SOURCE_COLUMN}]`, got `{}`",
                    names.join(",")
                ),
            })
        }
    };

    let mut points = Vec::new();
    let mut rho = Vec::new();
    let mut sources = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(&e, "row", e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let number = |idx: usize, name: &str| -> Result<f64> {
            let raw = record.get(idx).unwrap_or("");
            raw.parse::<f64>().map_err(|_| Error::Parse {
                line,
                column: name.to_string(),
                message: format!("`{raw}` is not a number"),
            })
        };
        let up = number(0, UP_COLUMN)?;
        let us = number(1, US_COLUMN)?;
        points.push(ShockPoint { up, us });
        if has_rho {
            rho.push(number(2, RHO0_COLUMN)?);
        }
        if has_source {
            let idx = if has_rho { 3 } else { 2 };
            sources.push(record.get(idx).unwrap_or("").to_string());
        }
    }
    ShockDataset::new(
        material,
        points,
        has_rho.then_some(rho),
        has_source.then_some(sources),
    )
}

fn parse_error(e: &csv::Error, column: &str, message: String) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        line,
        column: column.to_string(),
        message,
    }
}

/// Loads a dataset file; the material label defaults to the file stem.
pub fn load_dataset_file(path: impl AsRef<Path>, material: Option<&str>) -> Result<ShockDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let label = material
        .map(str::to_string)
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default();
    load_dataset(std::io::BufReader::new(file), &label)
}

fn point_key(p: &ShockPoint) -> (u64, u64) {
    // +0.0 and -0.0 compare equal, so normalize before hashing bits
    let norm = |v: f64| if v == 0.0 { 0.0_f64.to_bits() } else { v.to_bits() };
    (norm(p.up), norm(p.us))
}

/// Removes exact (up, us) duplicates, keeping first occurrences.
pub fn dedupe(ds: &ShockDataset) -> Result<(ShockDataset, usize)> {
    let mut seen = HashSet::new();
    let keep: Vec<usize> = (0..ds.len()).filter(|&i| seen.insert(point_key(&ds.points[i]))).collect();
    let removed = ds.len() - keep.len();
    if removed == 0 {
        return Ok((ds.clone(), 0));
    }
    if keep.len() < 3 {
        return Err(Error::Validation(format!(
            "removing {removed} duplicates leaves {} points (need 3)",
            keep.len()
        )));
    }
    Ok((ds.select(&keep)?, removed))
}

pub fn summarize(ds: &ShockDataset) -> DatasetSummary {
    let range = |f: fn(&ShockPoint) -> f64| {
        ds.points
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let mut seen = HashSet::new();
    let duplicate_count = ds.points.iter().filter(|p| !seen.insert(point_key(p))).count();
    DatasetSummary {
        material: ds.material.clone(),
        n: ds.len(),
        up_range: range(|p| p.up),
        us_range: range(|p| p.us),
        mean_rho0: ds.rho0.as_ref().map(|r| r.iter().sum::<f64>() / r.len() as f64),
        duplicate_count,
    }
}
