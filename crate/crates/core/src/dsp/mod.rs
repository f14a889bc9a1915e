//! Audio to multivariate feature series.

pub mod cube;
pub mod filter;
pub mod mel;
pub mod mfcc;
pub mod pipeline;
pub mod resample;
pub mod signal;
pub mod spectral;
pub mod stft;
pub mod trim;

pub use cube::{assemble_cube, temporal_downsample, FeatureCube};
pub use filter::bandpass;
pub use mel::{mel_spectrogram, MelFilterbank};
pub use mfcc::mfcc_with_deltas;
pub use pipeline::{featurize, frame_cube, preprocess, PipelineParams, TrimParams};
pub use resample::resample;
pub use signal::{decode_wav, decode_wav_bytes, AudioSignal};
pub use spectral::spectral_features;
pub use stft::{hann_periodic, stft, Spectrogram};
pub use trim::trim_nonspeech;

/// A named real-valued series (one per-frame feature).
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}
