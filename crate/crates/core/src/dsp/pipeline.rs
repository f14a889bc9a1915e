use serde::{Deserialize, Serialize};

use super::cube::{assemble_cube, temporal_downsample, FeatureCube, DEFAULT_N_POINTS, DEFAULT_OVERLAP};
use super::filter::bandpass;
use super::mel::{mel_spectrogram, DEFAULT_N_FILTERS};
use super::mfcc::{mfcc_with_deltas, DEFAULT_N_COEFFS};
use super::resample::resample;
use super::signal::AudioSignal;
use super::spectral::spectral_features;
use super::stft::{stft, DEFAULT_HOP, DEFAULT_WINDOW};
use super::trim::{trim_nonspeech, DEFAULT_FRAME_MS, DEFAULT_THRESHOLD_DB};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrimParams {
    pub frame_ms: f64,
    pub threshold_db: f64,
}

impl Default for TrimParams {
    fn default() -> Self {
        Self {
            frame_ms: DEFAULT_FRAME_MS,
            threshold_db: DEFAULT_THRESHOLD_DB,
        }
    }
}

/// Everything that turns a decoded signal into a feature cube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub resample_hz: u32,
    pub bandpass: Option<(f64, f64)>,
    pub trim: Option<TrimParams>,
    pub window_len: usize,
    pub hop: usize,
    pub n_mel: usize,
    pub n_mfcc: usize,
    pub n_points: usize,
    pub overlap: f64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            resample_hz: 8000,
            bandpass: None,
            trim: None,
            window_len: DEFAULT_WINDOW,
            hop: DEFAULT_HOP,
            n_mel: DEFAULT_N_FILTERS,
            n_mfcc: DEFAULT_N_COEFFS,
            n_points: DEFAULT_N_POINTS,
            overlap: DEFAULT_OVERLAP,
        }
    }
}

/// Trim, resample and band-pass, in that order.
pub fn preprocess(sig: &AudioSignal, params: &PipelineParams) -> Result<AudioSignal> {
    let trimmed = match &params.trim {
        Some(t) => trim_nonspeech(sig, t.frame_ms, t.threshold_db)?,
        None => sig.clone(),
    };
    let resampled = resample(&trimmed, params.resample_hz)?;
    match params.bandpass {
        Some((lo, hi)) => bandpass(&resampled, lo, hi),
        None => Ok(resampled),
    }
}

/// Full-resolution cube: one point per STFT frame.
pub fn frame_cube(sig: &AudioSignal, params: &PipelineParams) -> Result<FeatureCube> {
    let spec = stft(sig, params.window_len, params.hop)?;
    let spectral = spectral_features(&spec);
    let mel = mel_spectrogram(&spec, params.n_mel)?;
    let mfcc = mfcc_with_deltas(&mel, params.n_mfcc)?;
    assemble_cube(spectral, mel, mfcc)
}

/// Frame cube reduced to `n_points` time points.
pub fn featurize(sig: &AudioSignal, params: &PipelineParams) -> Result<FeatureCube> {
    let cube = frame_cube(sig, params)?;
    temporal_downsample(&cube, params.n_points, params.overlap)
}
