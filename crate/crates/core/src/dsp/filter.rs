use std::f64::consts::PI;

use super::signal::AudioSignal;
use crate::error::{Error, Result};

/// Pole-pair quality factors of a 4th-order Butterworth prototype.
const BUTTERWORTH4_Q: [f64; 2] = [0.541_196_100_146_197, 1.306_562_964_876_376_4];

#[derive(Debug, Clone, Copy)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

impl Biquad {
    fn lowpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * q);
        let a0 = 1.0 + alpha;
        let b1 = (1.0 - cos) / a0;
        Biquad {
            b: [b1 / 2.0, b1, b1 / 2.0],
            a: [-2.0 * cos / a0, (1.0 - alpha) / a0],
        }
    }

    fn highpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * q);
        let a0 = 1.0 + alpha;
        let b1 = (1.0 + cos) / a0;
        Biquad {
            b: [b1 / 2.0, -b1, b1 / 2.0],
            a: [-2.0 * cos / a0, (1.0 - alpha) / a0],
        }
    }

    fn run(&self, x: &mut [f64]) {
        let (mut z1, mut z2) = (0.0, 0.0);
        for v in x.iter_mut() {
            let input = *v;
            let y = self.b[0] * input + z1;
            z1 = self.b[1] * input - self.a[0] * y + z2;
            z2 = self.b[2] * input - self.a[1] * y;
            *v = y;
        }
    }
}

/// Zero-phase band-pass: a 4th-order Butterworth high-pass at `low` cascaded
/// with a 4th-order Butterworth low-pass at `high`, run forward then backward.
/// The low-pass stage is skipped when `high` sits at the Nyquist frequency.
pub fn bandpass(sig: &AudioSignal, low: f64, high: f64) -> Result<AudioSignal> {
    let fs = sig.sample_rate() as f64;
    let nyquist = fs / 2.0;
    if !(low > 0.0 && low < high && high <= nyquist) {
        return Err(Error::invalid(format!(
            "band edges must satisfy 0 < low < high <= {nyquist}, got ({low}, {high})"
        )));
    }
    let mut sections: Vec<Biquad> = BUTTERWORTH4_Q
        .iter()
        .map(|&q| Biquad::highpass(low, fs, q))
        .collect();
    if high < nyquist * 0.999 {
        sections.extend(BUTTERWORTH4_Q.iter().map(|&q| Biquad::lowpass(high, fs, q)));
    }
    let out = filtfilt(&sections, sig.samples());
    AudioSignal::new(out, sig.sample_rate())
}

/// Forward-backward filtering with odd-reflection padding at both ends.
fn filtfilt(sections: &[Biquad], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let pad = (3 * 4 * sections.len()).max(64).min(n.saturating_sub(1));
    let mut buf = Vec::with_capacity(n + 2 * pad);
    let (first, last) = (x[0], x[n - 1]);
    buf.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
    buf.extend_from_slice(x);
    buf.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

    for s in sections {
        s.run(&mut buf);
    }
    buf.reverse();
    for s in sections {
        s.run(&mut buf);
    }
    buf.reverse();
    buf[pad..pad + n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, rate: u32, secs: f64) -> AudioSignal {
        let n = (rate as f64 * secs) as usize;
        let s = (0..n)
            .map(|i| 0.5 * (2.0 * PI * freq * i as f64 / rate as f64).sin())
            .collect();
        AudioSignal::new(s, rate).unwrap()
    }

    fn rms(x: &[f64]) -> f64 {
        (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
    }

    // central half of the signal, away from edge transients
    fn mid(x: &[f64]) -> &[f64] {
        &x[x.len() / 4..3 * x.len() / 4]
    }

    #[test]
    fn stopband_tone_is_attenuated() {
        let sig = tone(100.0, 8000, 1.0);
        let out = bandpass(&sig, 300.0, 4000.0).unwrap();
        assert!(rms(mid(out.samples())) < 0.1 * rms(mid(sig.samples())));
    }

    #[test]
    fn passband_tone_is_preserved() {
        let sig = tone(1000.0, 8000, 1.0);
        let out = bandpass(&sig, 300.0, 4000.0).unwrap();
        let ratio = rms(mid(out.samples())) / rms(mid(sig.samples()));
        assert!((ratio - 1.0).abs() < 0.1, "ratio = {ratio}");
    }

    #[test]
    fn octave_outside_band_is_20db_down() {
        // one octave below the low edge and one above the high edge
        let low = bandpass(&tone(150.0, 16000, 1.0), 300.0, 3000.0).unwrap();
        let high = bandpass(&tone(6000.0, 16000, 1.0), 300.0, 3000.0).unwrap();
        let reference = rms(mid(tone(150.0, 16000, 1.0).samples()));
        assert!(rms(mid(low.samples())) < 0.1 * reference);
        assert!(rms(mid(high.samples())) < 0.1 * reference);
    }

    #[test]
    fn invalid_edges() {
        let sig = tone(100.0, 8000, 0.1);
        assert!(bandpass(&sig, 4000.0, 300.0).is_err());
        assert!(bandpass(&sig, 300.0, 300.0).is_err());
        assert!(bandpass(&sig, 0.0, 300.0).is_err());
        assert!(bandpass(&sig, 300.0, 4001.0).is_err());
    }
}
