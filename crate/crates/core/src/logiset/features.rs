//! Second-level feature functions applied to a sub-series.
//!
//! The four symbolic functions quantize the sub-series into three
//! equal-width bins between its minimum and maximum (a constant sub-series
//! falls entirely in bin 0):
//!
//! - `entropy_pairs`: Shannon entropy (nats) of consecutive bin pairs.
//! - `transition_var`: population variance of the nine entries of the
//!   row-normalized bin transition matrix (rows with no outgoing transition
//!   stay zero).
//! - `stretch_high`: longest run of points strictly above the mean.
//! - `stretch_decr`: longest run of strictly decreasing steps.
//!
//! `std` is the sample standard deviation. On a single point every
//! dispersion or symbolic function is 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFn {
    Max,
    Min,
    Mean,
    Median,
    Std,
    EntropyPairs,
    TransitionVar,
    StretchHigh,
    StretchDecr,
}

impl FeatureFn {
    pub const ALL: [FeatureFn; 9] = [
        FeatureFn::Max,
        FeatureFn::Min,
        FeatureFn::Mean,
        FeatureFn::Median,
        FeatureFn::Std,
        FeatureFn::EntropyPairs,
        FeatureFn::TransitionVar,
        FeatureFn::StretchHigh,
        FeatureFn::StretchDecr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureFn::Max => "max",
            FeatureFn::Min => "min",
            FeatureFn::Mean => "mean",
            FeatureFn::Median => "median",
            FeatureFn::Std => "std",
            FeatureFn::EntropyPairs => "entropy_pairs",
            FeatureFn::TransitionVar => "transition_var",
            FeatureFn::StretchHigh => "stretch_high",
            FeatureFn::StretchDecr => "stretch_decr",
        }
    }

    /// Applies the function to an already-sliced sub-series.
    pub fn apply(self, xs: &[f64]) -> f64 {
        debug_assert!(!xs.is_empty());
        match self {
            FeatureFn::Max => xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            FeatureFn::Min => xs.iter().copied().fold(f64::INFINITY, f64::min),
            FeatureFn::Mean => mean(xs),
            FeatureFn::Median => median(xs),
            FeatureFn::Std => std_dev(xs),
            FeatureFn::EntropyPairs => entropy_pairs(xs),
            FeatureFn::TransitionVar => transition_var(xs),
            FeatureFn::StretchHigh => stretch_high(xs),
            FeatureFn::StretchDecr => stretch_decr(xs),
        }
    }
}

impl fmt::Display for FeatureFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureFn::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown feature function {s:?}")))
    }
}

/// `f` over the points of `series` covered by `w`.
pub fn compute_feature(f: FeatureFn, series: &[f64], w: Interval) -> Result<f64> {
    if !w.fits(series.len()) {
        return Err(Error::invalid(format!(
            "interval {w} outside series of length {}",
            series.len()
        )));
    }
    Ok(f.apply(&series[w.x..w.y]))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn quantize3(xs: &[f64]) -> Vec<usize> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    if !(width > 0.0) {
        return vec![0; xs.len()];
    }
    xs.iter()
        .map(|v| (((v - lo) / width * 3.0).floor() as usize).min(2))
        .collect()
}

fn pair_counts(bins: &[usize]) -> [[f64; 3]; 3] {
    let mut counts = [[0.0; 3]; 3];
    for p in bins.windows(2) {
        counts[p[0]][p[1]] += 1.0;
    }
    counts
}

fn entropy_pairs(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let counts = pair_counts(&quantize3(xs));
    let total = (xs.len() - 1) as f64;
    -counts
        .iter()
        .flatten()
        .filter(|&&c| c > 0.0)
        .map(|c| {
            let p = c / total;
            p * p.ln()
        })
        .sum::<f64>()
}

fn transition_var(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let counts = pair_counts(&quantize3(xs));
    let mut probs = [0.0; 9];
    for (a, row) in counts.iter().enumerate() {
        let out: f64 = row.iter().sum();
        if out > 0.0 {
            for (b, c) in row.iter().enumerate() {
                probs[3 * a + b] = c / out;
            }
        }
    }
    let m = probs.iter().sum::<f64>() / 9.0;
    probs.iter().map(|p| (p - m) * (p - m)).sum::<f64>() / 9.0
}

fn stretch_high(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    longest_run(xs.iter().map(|&v| v > m))
}

fn stretch_decr(xs: &[f64]) -> f64 {
    longest_run(xs.windows(2).map(|p| p[1] < p[0]))
}

fn longest_run(flags: impl Iterator<Item = bool>) -> f64 {
    let (mut best, mut cur) = (0usize, 0usize);
    for f in flags {
        cur = if f { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best as f64
}
