use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::signal::AudioSignal;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 256;
pub const DEFAULT_HOP: usize = 128;

/// Magnitude spectrogram, stored frame-major: `magnitudes[frame][bin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub magnitudes: Vec<Vec<f64>>,
    pub bin_freqs: Vec<f64>,
    pub frame_hop: usize,
    pub window_len: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn n_bins(&self) -> usize {
        self.bin_freqs.len()
    }
}

/// Periodic Hann window: `w[k] = 0.5 (1 - cos(2 pi k / K))`.
/// Quarter points are exact.
pub fn hann_periodic(len: usize) -> Vec<f64> {
    (0..len).map(|k| 0.5 * (1.0 - cos_turn(k, len))).collect()
}

/// `cos(2 pi k / n)`, reduced to the first quadrant in integer arithmetic.
fn cos_turn(k: usize, n: usize) -> f64 {
    let r = 4 * (k % n);
    let (q, rem) = (r / n, r % n);
    let a = PI * rem as f64 / (2 * n) as f64;
    match q {
        0 => a.cos(),
        1 => -a.sin(),
        2 => -a.cos(),
        _ => a.sin(),
    }
}

pub fn frame_count(n_samples: usize, window_len: usize, hop: usize) -> usize {
    if n_samples < window_len {
        0
    } else {
        (n_samples - window_len) / hop + 1
    }
}

pub fn stft(sig: &AudioSignal, window_len: usize, hop: usize) -> Result<Spectrogram> {
    if window_len < 2 || hop == 0 {
        return Err(Error::invalid("window length must be >= 2 and hop >= 1"));
    }
    let n = sig.len();
    if n < window_len {
        return Err(Error::invalid(format!(
            "signal of {n} samples is shorter than one window ({window_len})"
        )));
    }
    let frames = frame_count(n, window_len, hop);
    let window = hann_periodic(window_len);
    let n_bins = window_len / 2 + 1;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(window_len);
    let samples = sig.samples();

    let magnitudes = crate::par::map_range(frames, |f| {
        let start = f * hop;
        let mut buf: Vec<Complex<f64>> = samples[start..start + window_len]
            .iter()
            .zip(&window)
            .map(|(&x, &w)| Complex::new(x * w, 0.0))
            .collect();
        fft.process(&mut buf);
        buf[..n_bins].iter().map(|c| c.norm()).collect::<Vec<f64>>()
    });
    let rate = sig.sample_rate() as f64;
    let bin_freqs = (0..n_bins)
        .map(|k| k as f64 * rate / window_len as f64)
        .collect();
    Ok(Spectrogram {
        magnitudes,
        bin_freqs,
        frame_hop: hop,
        window_len,
        sample_rate: sig.sample_rate(),
    })
}
