use crate::error::{Error, Result};

/// Shannon entropy in bits of a class histogram. Terms are summed in
/// ascending order so the result does not depend on class order.
pub fn entropy(histogram: &[usize]) -> Result<f64> {
    let total: usize = histogram.iter().sum();
    if total == 0 {
        return Err(Error::invalid("entropy of an empty histogram"));
    }
    Ok(entropy_of(histogram, total))
}

pub(crate) fn entropy_of(histogram: &[usize], total: usize) -> f64 {
    let mut terms: Vec<f64> = histogram
        .iter()
        .filter(|&&c| c > 0 && c < total)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Information gain of splitting `parent` into `left` and `right`, clamped
/// to `[0, H(parent)]`.
pub fn split_gain(parent_entropy: f64, left: &[usize], right: &[usize]) -> f64 {
    let nl: usize = left.iter().sum();
    let nr: usize = right.iter().sum();
    let n = (nl + nr) as f64;
    let child = (nl as f64 / n) * entropy_of(left, nl.max(1)) + (nr as f64 / n) * entropy_of(right, nr.max(1));
    (parent_entropy - child).clamp(0.0, parent_entropy)
}

/// Index of the largest count; ties go to the lowest index.
pub fn majority(histogram: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in histogram.iter().enumerate() {
        if c > histogram[best] {
            best = i;
        }
    }
    best
}
