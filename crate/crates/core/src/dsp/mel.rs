use super::stft::Spectrogram;
use super::Series;
use crate::error::{Error, Result};

pub const DEFAULT_N_FILTERS: usize = 26;

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular filters with unit peaks, centers evenly spaced in mel between
/// 0 Hz and the Nyquist frequency.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// `n_filters + 2` corner frequencies in Hz; filter `i` spans
    /// `edges[i]..edges[i + 2]` and peaks at `edges[i + 1]`.
    edges: Vec<f64>,
    weights: Vec<Vec<f64>>,
}

impl MelFilterbank {
    pub fn new(n_filters: usize, sample_rate: u32, bin_freqs: &[f64]) -> Result<Self> {
        if n_filters < 2 {
            return Err(Error::invalid("at least two mel filters are required"));
        }
        let top = hz_to_mel(sample_rate as f64 / 2.0);
        let edges: Vec<f64> = (0..n_filters + 2)
            .map(|i| mel_to_hz(top * i as f64 / (n_filters + 1) as f64))
            .collect();
        let mut bank = MelFilterbank {
            edges,
            weights: Vec::new(),
        };
        bank.weights = (0..n_filters)
            .map(|i| bin_freqs.iter().map(|&f| bank.response(i, f)).collect())
            .collect();
        Ok(bank)
    }

    pub fn n_filters(&self) -> usize {
        self.edges.len() - 2
    }

    pub fn centers(&self) -> &[f64] {
        &self.edges[1..self.edges.len() - 1]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// Response of filter `i` at frequency `hz`.
    pub fn response(&self, i: usize, hz: f64) -> f64 {
        let (lo, mid, hi) = (self.edges[i], self.edges[i + 1], self.edges[i + 2]);
        if hz <= lo || hz >= hi {
            0.0
        } else if hz <= mid {
            (hz - lo) / (mid - lo)
        } else {
            (hi - hz) / (hi - mid)
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.centers()
            .iter()
            .map(|c| format!("mel_{}", c.round() as i64))
            .collect()
    }
}

/// Applies the filterbank to every frame of the magnitude spectrogram.
pub fn mel_spectrogram(spec: &Spectrogram, n_filters: usize) -> Result<Vec<Series>> {
    let bank = MelFilterbank::new(n_filters, spec.sample_rate, &spec.bin_freqs)?;
    Ok(bank
        .names()
        .into_iter()
        .zip(bank.weights())
        .map(|(name, w)| {
            let values = spec
                .magnitudes
                .iter()
                .map(|frame| w.iter().zip(frame).map(|(a, b)| a * b).sum())
                .collect();
            Series::new(name, values)
        })
        .collect())
}
