use serde::{Deserialize, Serialize};

use super::mel::hz_to_mel;
use super::spectral::SPECTRAL_NAMES;
use super::Series;
use crate::error::{Error, Result};

pub const AUDIO_ATTRIBUTES: usize = 77;
pub const DEFAULT_N_POINTS: usize = 5;
pub const DEFAULT_OVERLAP: f64 = 0.2;

/// A multivariate series: named attributes sharing a common length.
/// Values are stored attribute-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCube {
    names: Vec<String>,
    series: Vec<Vec<f64>>,
}

impl FeatureCube {
    pub fn new(names: Vec<String>, series: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != series.len() {
            return Err(Error::LengthMismatch(format!(
                "{} names for {} series",
                names.len(),
                series.len()
            )));
        }
        let Some(first) = series.first() else {
            return Err(Error::invalid("a feature cube needs at least one attribute"));
        };
        let len = first.len();
        if len == 0 {
            return Err(Error::invalid("series must be non-empty"));
        }
        for (name, s) in names.iter().zip(&series) {
            if s.len() != len {
                return Err(Error::LengthMismatch(format!(
                    "attribute {name} has {} points, expected {len}",
                    s.len()
                )));
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("attribute {name} has non-finite values")));
            }
        }
        Ok(Self { names, series })
    }

    /// Builds a cube from named series in the order given.
    pub fn from_series(series: Vec<Series>) -> Result<Self> {
        let (names, values) = series.into_iter().map(|s| (s.name, s.values)).unzip();
        Self::new(names, values)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_attributes(&self) -> usize {
        self.series.len()
    }

    /// Number of time points.
    pub fn len(&self) -> usize {
        self.series[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn series(&self, attr: usize) -> &[f64] {
        &self.series[attr]
    }

    pub fn all_series(&self) -> &[Vec<f64>] {
        &self.series
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn mel_hz(name: &str) -> Option<f64> {
    name.strip_prefix("mel_")?.parse().ok()
}

/// Concatenates spectral, mel and cepstral series into a cube: spectral
/// features alphabetically, mel bands by ascending frequency, then cepstra
/// and their deltas in the order produced by `mfcc_with_deltas`.
pub fn assemble_cube(
    mut spectral: Vec<Series>,
    mut mel: Vec<Series>,
    mfcc: Vec<Series>,
) -> Result<FeatureCube> {
    if spectral.len() != SPECTRAL_NAMES.len() {
        return Err(Error::invalid(format!(
            "expected {} spectral series, got {}",
            SPECTRAL_NAMES.len(),
            spectral.len()
        )));
    }
    if mfcc.len() % 3 != 0 {
        return Err(Error::invalid("cepstral series must come in triples"));
    }
    spectral.sort_by(|a, b| a.name.cmp(&b.name));
    let mut keyed = Vec::with_capacity(mel.len());
    for s in mel.drain(..) {
        let hz = mel_hz(&s.name)
            .ok_or_else(|| Error::invalid(format!("mel series name {:?}", s.name)))?;
        keyed.push((hz_to_mel(hz), s));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let all: Vec<Series> = spectral
        .into_iter()
        .chain(keyed.into_iter().map(|(_, s)| s))
        .chain(mfcc)
        .collect();
    FeatureCube::from_series(all)
}

/// Window geometry for [`temporal_downsample`]: `(window_len, hop)`.
pub fn downsample_windows(len: usize, n_points: usize, overlap: f64) -> (usize, usize) {
    const EPS: f64 = 1e-9;
    let span = n_points as f64 - (n_points as f64 - 1.0) * overlap;
    let window = ((len as f64 / span - EPS).ceil() as usize).max(1);
    let hop = (((1.0 - overlap) * window as f64 + EPS).floor() as usize).max(1);
    (window, hop)
}

/// Averages each attribute over `n_points` overlapping windows.
pub fn temporal_downsample(cube: &FeatureCube, n_points: usize, overlap: f64) -> Result<FeatureCube> {
    if n_points == 0 {
        return Err(Error::invalid("n_points must be positive"));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::invalid("overlap must lie in [0, 1)"));
    }
    let len = cube.len();
    if len < n_points {
        return Err(Error::invalid(format!(
            "series of {len} frames cannot be reduced to {n_points} points"
        )));
    }
    let (window, hop) = downsample_windows(len, n_points, overlap);
    let ranges: Vec<(usize, usize)> = (0..n_points)
        .map(|i| {
            let start = (i * hop).min(len - 1);
            (start, (start + window).min(len))
        })
        .collect();
    let series = cube
        .all_series()
        .iter()
        .map(|s| {
            ranges
                .iter()
                .map(|&(a, b)| s[a..b].iter().sum::<f64>() / (b - a) as f64)
                .collect()
        })
        .collect();
    FeatureCube::new(cube.names().to_vec(), series)
}
