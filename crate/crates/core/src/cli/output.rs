use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dataset::format_float;
use crate::error::{Error, Result};

/// Files produced by one run, held in memory until the run succeeds.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: BTreeMap<String, Vec<u8>>,
}

impl OutputSet {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.insert(name.into(), bytes);
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.get(name).map(|v| v.as_slice())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(|k| k.as_str())
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("output values serialize");
        bytes.push(b'\n');
        self.add(name, bytes);
    }

    /// Writes every file plus `manifest.json` into `dir`.
    pub fn write_all(&self, dir: &Path, config: &serde_json::Value) -> Result<()> {
        let io = |path: &Path, source| Error::Io {
            path: path.display().to_string(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| io(&path, e))?;
        }
        let path = dir.join("manifest.json");
        let mut manifest = serde_json::to_vec_pretty(&self.manifest(config)).expect("manifest serializes");
        manifest.push(b'\n');
        std::fs::write(&path, manifest).map_err(|e| io(&path, e))
    }

    pub fn manifest(&self, config: &serde_json::Value) -> serde_json::Value {
        let files: BTreeMap<&str, String> = self.files.iter().map(|(k, v)| (k.as_str(), sha256_hex(v))).collect();
        serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "seed": config.get("seed").cloned().unwrap_or(serde_json::Value::Null),
            "config": config,
            "files": files,
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// CSV with a header row and float columns.
pub fn numeric_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|v| format_float(*v))).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// CSV with arbitrary string cells.
pub fn text_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Reads the named float columns back out of CSV bytes.
pub fn read_columns(bytes: &[u8], names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().map_err(|e| Error::Config(format!("csv: {e}")))?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            header
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| Error::Config(format!("missing column {n}")))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Config(format!("csv: {e}")))?;
        for (c, &i) in cols.iter_mut().zip(&idx) {
            c.push(rec[i].parse().map_err(|e| Error::Config(format!("csv value {:?}: {e}", &rec[i])))?);
        }
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let bytes = numeric_csv(&["a", "b"], vec![vec![0.1, 2.0], vec![-3.5, 1e-300]]);
        assert_eq!(std::str::from_utf8(&bytes).unwrap(), "a,b\n0.1,2.0\n-3.5,1e-300\n");
        let cols = read_columns(&bytes, &["b", "a"]).unwrap();
        assert_eq!(cols, vec![vec![2.0, 1e-300], vec![0.1, -3.5]]);
    }

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
