use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts indexed `[truth][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(counts: Vec<Vec<usize>>) -> Result<Self> {
        let k = counts.len();
        if k == 0 || counts.iter().any(|r| r.len() != k) {
            return Err(Error::invalid("confusion matrix must be square and non-empty"));
        }
        Ok(Self { counts })
    }

    pub fn from_predictions(truth: &[usize], predicted: &[usize], n_classes: usize) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::LengthMismatch(format!(
                "{} labels vs {} predictions",
                truth.len(),
                predicted.len()
            )));
        }
        let mut counts = vec![vec![0; n_classes]; n_classes];
        for (&t, &p) in truth.iter().zip(predicted) {
            if t >= n_classes || p >= n_classes {
                return Err(Error::UnknownLabel(format!("class index {}", t.max(p))));
            }
            counts[t][p] += 1;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Overall accuracy in percent.
    pub fn accuracy(&self) -> Result<f64> {
        let n = self.nonempty_total()?;
        Ok(100.0 * self.trace() as f64 / n)
    }

    /// Cohen's kappa in percent; 0 when chance agreement is 1.
    pub fn kappa(&self) -> Result<f64> {
        let n = self.nonempty_total()?;
        let k = self.counts.len();
        let p_o = self.trace() as f64 / n;
        let mut p_e = 0.0;
        for i in 0..k {
            let row: usize = self.counts[i].iter().sum();
            let col: usize = self.counts.iter().map(|r| r[i]).sum();
            p_e += row as f64 * col as f64;
        }
        p_e /= n * n;
        if p_e == 1.0 {
            return Ok(0.0);
        }
        Ok(100.0 * (p_o - p_e) / (1.0 - p_e))
    }

    fn nonempty_total(&self) -> Result<f64> {
        match self.total() {
            0 => Err(Error::invalid("empty confusion matrix")),
            n => Ok(n as f64),
        }
    }
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
