use std::f64::consts::PI;

use super::Series;
use crate::error::{Error, Result};

pub const DEFAULT_N_COEFFS: usize = 13;
pub const LOG_FLOOR: f64 = 1e-10;
pub const DELTA_HALF_WINDOW: usize = 2;

/// Orthonormal DCT-II, keeping the first `n_keep` coefficients.
pub fn dct_ii(x: &[f64], n_keep: usize) -> Vec<f64> {
    let n = x.len() as f64;
    (0..n_keep.min(x.len()))
        .map(|k| {
            let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            scale
                * x.iter()
                    .enumerate()
                    .map(|(i, v)| v * (PI * k as f64 * (2 * i + 1) as f64 / (2.0 * n)).cos())
                    .sum::<f64>()
        })
        .collect()
}

/// Inverse of the full orthonormal [`dct_ii`] (an orthonormal DCT-III).
pub fn inverse_dct_ii(c: &[f64]) -> Vec<f64> {
    let n = c.len() as f64;
    (0..c.len())
        .map(|i| {
            c.iter()
                .enumerate()
                .map(|(k, v)| {
                    let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                    scale * v * (PI * k as f64 * (2 * i + 1) as f64 / (2.0 * n)).cos()
                })
                .sum()
        })
        .collect()
}

/// Regression slope over `t-2..=t+2` with edge replication.
pub fn delta(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let at = |i: isize| x[i.clamp(0, n as isize - 1) as usize];
    let half = DELTA_HALF_WINDOW as isize;
    let denom = 2.0 * (1..=half).map(|k| (k * k) as f64).sum::<f64>();
    (0..n as isize)
        .map(|t| (1..=half).map(|k| k as f64 * (at(t + k) - at(t - k))).sum::<f64>() / denom)
        .collect()
}

/// Log-mel cepstra per frame plus first and second temporal deltas.
/// Output order: `mfcc_0..`, `delta_0..`, `deltadelta_0..`.
pub fn mfcc_with_deltas(mel: &[Series], n_coeffs: usize) -> Result<Vec<Series>> {
    if mel.is_empty() {
        return Err(Error::invalid("no mel series"));
    }
    if n_coeffs == 0 || n_coeffs > mel.len() {
        return Err(Error::invalid(format!(
            "coefficient count {n_coeffs} must be in 1..={}",
            mel.len()
        )));
    }
    let frames = mel[0].values.len();
    if mel.iter().any(|s| s.values.len() != frames) {
        return Err(Error::LengthMismatch("mel series lengths differ".into()));
    }
    if mel.iter().any(|s| s.values.iter().any(|&v| v < 0.0)) {
        return Err(Error::invalid("mel energies must be non-negative"));
    }
    let per_frame: Vec<Vec<f64>> = (0..frames)
        .map(|t| {
            let logs: Vec<f64> = mel.iter().map(|s| s.values[t].max(LOG_FLOOR).ln()).collect();
            dct_ii(&logs, n_coeffs)
        })
        .collect();
    let cepstra: Vec<Vec<f64>> = (0..n_coeffs)
        .map(|k| per_frame.iter().map(|f| f[k]).collect())
        .collect();
    let deltas: Vec<Vec<f64>> = cepstra.iter().map(|c| delta(c)).collect();
    let delta2: Vec<Vec<f64>> = deltas.iter().map(|d| delta(d)).collect();

    let mut out = Vec::with_capacity(3 * n_coeffs);
    for (k, v) in cepstra.into_iter().enumerate() {
        out.push(Series::new(format!("mfcc_{k}"), v));
    }
    for (k, v) in deltas.into_iter().enumerate() {
        out.push(Series::new(format!("delta_{k}"), v));
    }
    for (k, v) in delta2.into_iter().enumerate() {
        out.push(Series::new(format!("deltadelta_{k}"), v));
    }
    Ok(out)
}
