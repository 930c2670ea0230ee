use crate::error::{Error, Result};

/// Order-statistic quantile with linear interpolation at `h = (n − 1) p`.
pub fn empirical_quantile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("empirical quantile of an empty list"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("quantile probability must be in [0, 1], got {p}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, p))
}

/// Same convention on an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Several quantiles of one unsorted sample, sorting a scratch copy in place.
pub fn quantiles_in_place(scratch: &mut [f64], probs: &[f64]) -> Vec<f64> {
    scratch.sort_unstable_by(f64::total_cmp);
    probs.iter().map(|&p| quantile_sorted(scratch, p)).collect()
}

/// Mean and sample standard deviation (n − 1 denominator; 0 for n = 1).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_cases() {
        assert_eq!(empirical_quantile(&[1.0, 2.0, 3.0], 0.5).unwrap(), 2.0);
        assert_eq!(empirical_quantile(&[4.0, 1.0, 3.0, 2.0], 0.5).unwrap(), 2.5);
        assert_eq!(empirical_quantile(&[10.0, 20.0], 0.25).unwrap(), 12.5);
        assert_eq!(empirical_quantile(&[5.0], 0.9).unwrap(), 5.0);
        assert_eq!(empirical_quantile(&[3.0, 1.0], 0.0).unwrap(), 1.0);
        assert_eq!(empirical_quantile(&[3.0, 1.0], 1.0).unwrap(), 3.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(empirical_quantile(&[], 0.5), Err(Error::EmptyInput(_))));
        assert!(matches!(empirical_quantile(&[1.0], 1.5), Err(Error::Domain(_))));
    }
}
