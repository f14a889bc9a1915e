use std::path::Path;

use crate::error::{Error, Result};

/// Mono audio with samples in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioSignal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ZeroLengthAudio);
        }
        if sample_rate == 0 {
            return Err(Error::invalid("sample rate must be positive"));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {i}")));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Truncates or zero-pads to exactly `n` samples. Returns true when padding
    /// was needed.
    pub fn fit_to_len(&mut self, n: usize) -> Result<bool> {
        if n == 0 {
            return Err(Error::ZeroLengthAudio);
        }
        let padded = self.samples.len() < n;
        self.samples.resize(n, 0.0);
        Ok(padded)
    }
}

/// Reads a PCM WAV file (8/16/24/32-bit integer or 32-bit float) and folds
/// all channels to mono by averaging.
pub fn decode_wav(path: impl AsRef<Path>) -> Result<AudioSignal> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) => Error::Unreadable(format!("{}: {io}", path.display())),
        hound::Error::Unsupported => Error::UnsupportedEncoding(path.display().to_string()),
        other => Error::Unreadable(format!("{}: {other}", path.display())),
    })?;
    decode_reader(reader)
}

/// Same as [`decode_wav`] over an in-memory byte buffer.
pub fn decode_wav_bytes(bytes: &[u8]) -> Result<AudioSignal> {
    let reader = hound::WavReader::new(std::io::Cursor::new(bytes)).map_err(|e| match e {
        hound::Error::Unsupported => Error::UnsupportedEncoding("in-memory buffer".into()),
        other => Error::Unreadable(other.to_string()),
    })?;
    decode_reader(reader)
}

fn decode_reader<R: std::io::Read>(reader: hound::WavReader<R>) -> Result<AudioSignal> {
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(Error::UnsupportedEncoding("zero channels".into()));
    }
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Unreadable(e.to_string()))?,
        (hound::SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let scale = 1.0 / (1u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 * scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Unreadable(e.to_string()))?
        }
        (fmt, bits) => {
            return Err(Error::UnsupportedEncoding(format!("{fmt:?} {bits}-bit")));
        }
    };
    if interleaved.len() < channels {
        return Err(Error::ZeroLengthAudio);
    }
    let mono: Vec<f64> = interleaved
        .chunks_exact(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect();
    AudioSignal::new(mono, spec.sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wav_bytes<S: hound::Sample + Copy>(spec: hound::WavSpec, samples: &[S]) -> Vec<u8> {
        let mut cursor = std::io::Cursor::new(Vec::new());
        {
            let mut w = hound::WavWriter::new(&mut cursor, spec).unwrap();
            for &s in samples {
                w.write_sample(s).unwrap();
            }
            w.finalize().unwrap();
        }
        cursor.into_inner()
    }

    fn spec(channels: u16, bits: u16, fmt: hound::SampleFormat) -> hound::WavSpec {
        hound::WavSpec {
            channels,
            sample_rate: 8000,
            bits_per_sample: bits,
            sample_format: fmt,
        }
    }

    #[test]
    fn sixteen_bit_scaling() {
        let bytes = wav_bytes(spec(1, 16, hound::SampleFormat::Int), &[0i16, 16384, -16384]);
        let sig = decode_wav_bytes(&bytes).unwrap();
        assert_eq!(sig.samples(), &[0.0, 0.5, -0.5]);
        assert_eq!(sig.sample_rate(), 8000);
    }

    #[test]
    fn stereo_is_averaged() {
        let bytes = wav_bytes(spec(2, 32, hound::SampleFormat::Float), &[0.2f32, 0.4]);
        let sig = decode_wav_bytes(&bytes).unwrap();
        assert_eq!(sig.len(), 1);
        assert!((sig.samples()[0] - 0.3).abs() < 1e-7);
    }

    #[test]
    fn eight_bit_is_centered() {
        let bytes = wav_bytes(spec(1, 8, hound::SampleFormat::Int), &[0i8, 64, -128]);
        let sig = decode_wav_bytes(&bytes).unwrap();
        assert_eq!(sig.samples(), &[0.0, 0.5, -1.0]);
    }

    #[test]
    fn empty_data_chunk() {
        let bytes = wav_bytes::<i16>(spec(1, 16, hound::SampleFormat::Int), &[]);
        assert!(matches!(decode_wav_bytes(&bytes), Err(Error::ZeroLengthAudio)));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            decode_wav("/nonexistent/definitely/not/here.wav"),
            Err(Error::Unreadable(_))
        ));
    }

    #[test]
    fn fit_pads_and_clips() {
        let mut s = AudioSignal::new(vec![1.0; 4], 10).unwrap();
        assert!(s.fit_to_len(6).unwrap());
        assert_eq!(s.samples(), &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        assert!(!s.fit_to_len(2).unwrap());
        assert_eq!(s.len(), 2);
    }
}
