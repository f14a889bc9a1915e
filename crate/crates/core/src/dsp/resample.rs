use std::f64::consts::PI;

use super::signal::AudioSignal;
use crate::error::{Error, Result};

/// Zero crossings of the sinc kernel kept on each side of the center.
const HALF_ZEROS: f64 = 16.0;
const KAISER_BETA: f64 = 8.0;

/// Band-limited resampling with a Kaiser-windowed sinc kernel.
///
/// Output length is `round(len * target / source)`. When downsampling, the
/// kernel cutoff moves to the target Nyquist frequency.
pub fn resample(sig: &AudioSignal, target_rate: u32) -> Result<AudioSignal> {
    if target_rate == 0 {
        return Err(Error::invalid("target rate must be positive"));
    }
    let src_rate = sig.sample_rate();
    if src_rate == target_rate {
        return Ok(sig.clone());
    }
    let input = sig.samples();
    let ratio = target_rate as f64 / src_rate as f64;
    let out_len = (input.len() as f64 * ratio).round() as usize;
    if out_len == 0 {
        return Err(Error::ZeroLengthAudio);
    }
    let cutoff = ratio.min(1.0);
    let half_width = HALF_ZEROS / cutoff;
    let norm = bessel_i0(KAISER_BETA);

    let out = crate::par::map_range(out_len, |j| {
        let t = j as f64 / ratio;
        let lo = (t - half_width).ceil().max(0.0) as usize;
        let hi = ((t + half_width).floor() as usize).min(input.len() - 1);
        let mut acc = 0.0;
        for (i, &x) in input.iter().enumerate().take(hi + 1).skip(lo) {
            let d = i as f64 - t;
            let r = d / half_width;
            if r.abs() > 1.0 {
                continue;
            }
            let window = bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / norm;
            acc += x * cutoff * sinc(cutoff * d) * window;
        }
        acc
    });
    AudioSignal::new(out, target_rate)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, rate: u32, n: usize) -> AudioSignal {
        let s = (0..n)
            .map(|i| 0.5 * (2.0 * PI * freq * i as f64 / rate as f64).sin())
            .collect();
        AudioSignal::new(s, rate).unwrap()
    }

    #[test]
    fn halving_rate_halves_length() {
        let out = resample(&tone(440.0, 16000, 16000), 8000).unwrap();
        assert_eq!(out.len(), 8000);
        assert_eq!(out.sample_rate(), 8000);
    }

    #[test]
    fn same_rate_is_identity() {
        let sig = tone(440.0, 8000, 300);
        assert_eq!(resample(&sig, 8000).unwrap(), sig);
    }

    #[test]
    fn zero_target_rejected() {
        assert!(resample(&tone(440.0, 8000, 10), 0).is_err());
    }

    #[test]
    fn upsampled_tone_matches_analytic_samples() {
        let out = resample(&tone(300.0, 8000, 4000), 16000).unwrap();
        // away from the edges the interpolated signal tracks the continuous sine
        let max_err = (1000..7000)
            .map(|i| {
                let expect = 0.5 * (2.0 * PI * 300.0 * i as f64 / 16000.0).sin();
                (out.samples()[i] - expect).abs()
            })
            .fold(0.0, f64::max);
        assert!(max_err < 1e-3, "max_err = {max_err}");
    }

    #[test]
    fn bessel_known_value() {
        // I0(1) = 1.2660658777520082
        assert!((bessel_i0(1.0) - 1.2660658777520082).abs() < 1e-14);
    }
}
