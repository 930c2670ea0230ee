use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::posterior::{beta_covariance, credible_interval, PosteriorNIG};

/// One row of a coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub material: String,
    pub parameter: String,
    pub mean: f64,
    pub sd: f64,
    pub lo: f64,
    pub hi: f64,
    pub units: String,
}

/// `C0, S` for the straight line, `C0, C1, …` otherwise.
pub fn parameter_names(degree: usize) -> Vec<String> {
    if degree == 1 {
        vec!["C0".into(), "S".into()]
    } else {
        (0..=degree).map(|k| format!("C{k}")).collect()
    }
}

/// Units of coefficient `k` for `us = Σ β_k up^k` with velocities in km/s.
pub fn parameter_units(k: usize) -> String {
    match k {
        0 => "km/s".into(),
        1 => "".into(),
        k => format!("(km/s)^-{}", k - 1),
    }
}

/// Posterior mean, sd from `(ν/(ν−2))·Σ`, and equal-tailed interval from Σ.
pub fn posterior_table(material: &str, post: &PosteriorNIG, level: f64) -> Result<Vec<ParameterSummary>> {
    let cov = beta_covariance(post)?;
    parameter_names(post.degree)
        .into_iter()
        .enumerate()
        .map(|(k, name)| {
            let (lo, hi) = credible_interval(post, k, level)?;
            Ok(ParameterSummary {
                material: material.to_string(),
                parameter: name,
                mean: post.beta_mean[k],
                sd: cov.get(k, k).sqrt(),
                lo,
                hi,
                units: parameter_units(k),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_units() {
        assert_eq!(parameter_names(1), ["C0", "S"]);
        assert_eq!(parameter_names(3), ["C0", "C1", "C2", "C3"]);
        assert_eq!(parameter_units(0), "km/s");
        assert_eq!(parameter_units(2), "(km/s)^-1");
    }
}
