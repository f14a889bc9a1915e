//! Per-frame descriptors of a magnitude spectrum.
//!
//! For a frame with magnitudes `m_k` at frequencies `f_k` (k = 0..B-1) and
//! total `S = sum m_k`:
//!
//! | name       | definition                                                         |
//! |------------|--------------------------------------------------------------------|
//! | centroid   | `c = sum f_k m_k / S`                                              |
//! | crest      | `max m_k / (S / B)`                                                |
//! | decrease   | `sum_{k>=1} (m_k - m_0) / k / sum_{k>=1} m_k`                      |
//! | entropy    | `-sum p_k log2 p_k`, `p_k = m_k / S`                               |
//! | f0         | normalized autocorrelation peak in 60..1000 Hz, 0 below 0.3        |
//! | flatness   | geometric mean / arithmetic mean of `m_k`                          |
//! | flux       | `sqrt(sum (m_k - m'_k)^2)` against the previous frame (zeros first)|
//! | kurtosis   | `sum (f_k - c)^4 m_k / (S spread^4)`                               |
//! | rolloff    | lowest `f_k` whose cumulative magnitude reaches 0.95 S             |
//! | skewness   | `sum (f_k - c)^3 m_k / (S spread^3)`                               |
//! | slope      | `(B sum f m - sum f sum m) / (B sum f^2 - (sum f)^2) / S`          |
//! | spread     | `sqrt(sum (f_k - c)^2 m_k / S)`                                    |
//!
//! An all-zero frame yields 0 everywhere except flatness = 1 and
//! entropy = log2(B).

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::stft::Spectrogram;
use super::Series;

pub const SPECTRAL_NAMES: [&str; 12] = [
    "centroid", "crest", "decrease", "entropy", "f0", "flatness", "flux", "kurtosis", "rolloff",
    "skewness", "slope", "spread",
];

pub const ROLLOFF_FRACTION: f64 = 0.95;
pub const F0_MIN_HZ: f64 = 60.0;
pub const F0_MAX_HZ: f64 = 1000.0;
pub const F0_MIN_CORRELATION: f64 = 0.3;

pub fn spectral_features(spec: &Spectrogram) -> Vec<Series> {
    let pitch = PitchTracker::new(spec);
    let zeros = vec![0.0; spec.n_bins()];
    let rows: Vec<[f64; 12]> = crate::par::map_range(spec.n_frames(), |t| {
        let prev = if t == 0 {
            &zeros
        } else {
            &spec.magnitudes[t - 1]
        };
        frame_features(&spec.magnitudes[t], prev, &spec.bin_freqs, &pitch)
    });
    SPECTRAL_NAMES
        .iter()
        .enumerate()
        .map(|(i, name)| Series::new(*name, rows.iter().map(|r| r[i]).collect()))
        .collect()
}

fn frame_features(m: &[f64], prev: &[f64], freqs: &[f64], pitch: &PitchTracker) -> [f64; 12] {
    let bins = m.len() as f64;
    let total: f64 = m.iter().sum();
    let flux = m
        .iter()
        .zip(prev)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if total <= 0.0 {
        return [0.0, 0.0, 0.0, bins.log2(), 0.0, 1.0, flux, 0.0, 0.0, 0.0, 0.0, 0.0];
    }

    let centroid = freqs.iter().zip(m).map(|(f, v)| f * v).sum::<f64>() / total;
    let moment = |p: i32| {
        freqs
            .iter()
            .zip(m)
            .map(|(f, v)| (f - centroid).powi(p) * v)
            .sum::<f64>()
            / total
    };
    let spread = moment(2).sqrt();
    let (skewness, kurtosis) = if spread > 0.0 {
        (moment(3) / spread.powi(3), moment(4) / spread.powi(4))
    } else {
        (0.0, 0.0)
    };

    let max = m.iter().copied().fold(0.0, f64::max);
    let crest = max / (total / bins);

    let entropy = -m
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|v| {
            let p = v / total;
            p * p.log2()
        })
        .sum::<f64>();

    let flatness = if m.iter().any(|&v| v <= 0.0) {
        0.0
    } else {
        let log_mean = m.iter().map(|v| v.ln()).sum::<f64>() / bins;
        log_mean.exp() / (total / bins)
    };

    let mut cumulative = 0.0;
    let target = ROLLOFF_FRACTION * total;
    let mut rolloff = *freqs.last().unwrap_or(&0.0);
    for (f, v) in freqs.iter().zip(m) {
        cumulative += v;
        if cumulative >= target {
            rolloff = *f;
            break;
        }
    }

    let sum_f: f64 = freqs.iter().sum();
    let sum_ff: f64 = freqs.iter().map(|f| f * f).sum();
    let sum_fm: f64 = freqs.iter().zip(m).map(|(f, v)| f * v).sum();
    let denom = bins * sum_ff - sum_f * sum_f;
    let slope = if denom > 0.0 {
        (bins * sum_fm - sum_f * total) / denom / total
    } else {
        0.0
    };

    let tail: f64 = m[1..].iter().sum();
    let decrease = if tail > 0.0 {
        m[1..]
            .iter()
            .enumerate()
            .map(|(i, v)| (v - m[0]) / (i + 1) as f64)
            .sum::<f64>()
            / tail
    } else {
        0.0
    };

    let f0 = pitch.estimate(m);

    [
        centroid, crest, decrease, entropy, f0, flatness, flux, kurtosis, rolloff, skewness, slope,
        spread,
    ]
}

/// F0 from the autocorrelation of the windowed frame, recovered as the
/// inverse FFT of the power spectrum. Lags are bounded by half the window so
/// the circular wrap stays small.
struct PitchTracker {
    ifft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    window_len: usize,
    min_lag: usize,
    max_lag: usize,
    sample_rate: f64,
}

impl PitchTracker {
    fn new(spec: &Spectrogram) -> Self {
        let rate = spec.sample_rate as f64;
        let window_len = spec.window_len;
        let min_lag = ((rate / F0_MAX_HZ).ceil() as usize).max(1);
        let max_lag = ((rate / F0_MIN_HZ).floor() as usize).min(window_len / 2);
        PitchTracker {
            ifft: FftPlanner::new().plan_fft_inverse(window_len),
            window_len,
            min_lag,
            max_lag,
            sample_rate: rate,
        }
    }

    fn estimate(&self, m: &[f64]) -> f64 {
        if self.min_lag + 1 >= self.max_lag {
            return 0.0;
        }
        let k = self.window_len;
        let mut buf: Vec<Complex<f64>> = (0..k)
            .map(|i| {
                let bin = if i <= k / 2 { i } else { k - i };
                Complex::new(m[bin] * m[bin], 0.0)
            })
            .collect();
        self.ifft.process(&mut buf);
        let r0 = buf[0].re;
        if r0 <= 0.0 {
            return 0.0;
        }
        let r: Vec<f64> = buf.iter().map(|c| c.re / r0).collect();
        let mut best: Option<(usize, f64)> = None;
        for lag in self.min_lag..=self.max_lag {
            let is_peak = r[lag] >= r[lag - 1] && r[lag] >= r[(lag + 1) % k];
            if is_peak && best.map_or(true, |(_, v)| r[lag] > v) {
                best = Some((lag, r[lag]));
            }
        }
        match best {
            Some((lag, v)) if v >= F0_MIN_CORRELATION => self.sample_rate / lag as f64,
            _ => 0.0,
        }
    }
}
