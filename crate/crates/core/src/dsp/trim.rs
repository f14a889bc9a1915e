use super::signal::AudioSignal;
use crate::error::{Error, Result};

pub const DEFAULT_FRAME_MS: f64 = 25.0;
pub const DEFAULT_THRESHOLD_DB: f64 = 35.0;

/// Drops frames whose RMS falls more than `threshold_db` below the loudest
/// frame and concatenates the rest in order. Frames do not overlap; a short
/// trailing frame is judged on its own samples.
pub fn trim_nonspeech(sig: &AudioSignal, frame_ms: f64, threshold_db: f64) -> Result<AudioSignal> {
    if !(frame_ms > 0.0) {
        return Err(Error::invalid("frame length must be positive"));
    }
    if !(threshold_db >= 0.0) {
        return Err(Error::invalid("threshold must be non-negative dB"));
    }
    let frame_len = ((frame_ms * sig.sample_rate() as f64 / 1000.0).round() as usize).max(1);
    let frames: Vec<&[f64]> = sig.samples().chunks(frame_len).collect();
    let rms: Vec<f64> = frames
        .iter()
        .map(|f| (f.iter().map(|v| v * v).sum::<f64>() / f.len() as f64).sqrt())
        .collect();
    let peak = rms.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::NoSpeech);
    }
    let floor = peak * 10f64.powf(-threshold_db / 20.0);
    let kept: Vec<f64> = frames
        .iter()
        .zip(&rms)
        .filter(|(_, &r)| r > 0.0 && r >= floor)
        .flat_map(|(f, _)| f.iter().copied())
        .collect();
    if kept.is_empty() {
        return Err(Error::NoSpeech);
    }
    AudioSignal::new(kept, sig.sample_rate())
}
