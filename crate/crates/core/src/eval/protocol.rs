use serde::{Deserialize, Serialize};

use super::holdout::{balanced_holdout, Holdout};
use super::metrics::{mean_std, ConfusionMatrix};
use crate::error::Result;
use crate::learner::{LearnParams, Model, ModelKind};
use crate::logiset::Logiset;
use crate::par;

/// Repeated balanced holdout settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub train_frac: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            train_frac: 0.8,
            repeats: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatMetrics {
    pub kappa: f64,
    pub accuracy: f64,
    pub leaves: f64,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Self {
        let (mean, std) = mean_std(values);
        Self { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub repeats: Vec<RepeatMetrics>,
    pub kappa: Summary,
    pub accuracy: Summary,
    pub leaves: Summary,
}

impl MetricsReport {
    pub fn from_repeats(repeats: Vec<RepeatMetrics>) -> Self {
        let col = |f: fn(&RepeatMetrics) -> f64| repeats.iter().map(f).collect::<Vec<_>>();
        Self {
            kappa: Summary::of(&col(|r| r.kappa)),
            accuracy: Summary::of(&col(|r| r.accuracy)),
            leaves: Summary::of(&col(|r| r.leaves)),
            repeats,
        }
    }
}

/// Learner seed used for repeat `r`.
pub fn repeat_learn_seed(params: &LearnParams, r: usize) -> u64 {
    params.seed.wrapping_add(r as u64)
}

/// Trains on one holdout and scores its test split.
pub fn run_holdout(
    ls: &Logiset,
    params: &LearnParams,
    kind: ModelKind,
    holdout: &Holdout,
) -> Result<(Model, RepeatMetrics)> {
    let train = ls.subset(&holdout.train)?;
    let model = Model::train(&train, params, kind)?;
    let predicted = model.predict_logiset(ls, &holdout.test)?;
    let truth: Vec<usize> = holdout.test.iter().map(|&i| ls.instance(i).label()).collect();
    let confusion = ConfusionMatrix::from_predictions(&truth, &predicted, ls.n_classes())?;
    let metrics = RepeatMetrics {
        kappa: confusion.kappa()?,
        accuracy: confusion.accuracy()?,
        leaves: model.leaf_count(),
        confusion,
    };
    Ok((model, metrics))
}

/// Runs the repeated balanced holdout protocol.
pub fn evaluate(ls: &Logiset, params: &LearnParams, kind: ModelKind, protocol: &Protocol) -> Result<MetricsReport> {
    params.validate()?;
    let holdouts = balanced_holdout(ls, protocol.train_frac, protocol.repeats, protocol.seed)?;
    let repeats = par::map_range(holdouts.len(), |r| {
        let p = LearnParams {
            seed: repeat_learn_seed(params, r),
            ..params.clone()
        };
        run_holdout(ls, &p, kind, &holdouts[r]).map(|(_, m)| m)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(MetricsReport::from_repeats(repeats))
}
