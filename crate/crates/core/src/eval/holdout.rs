use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logiset::Logiset;

pub const MIN_PER_CLASS: usize = 5;

/// One balanced train/test partition (sorted instance indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Holdout {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Deterministic generator for one repeat.
pub fn repeat_rng(seed: u64, repeat: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repeat);
    rng
}

/// Balanced repeated holdout over class-grouped indices: each repeat
/// downsamples every class to the minority count and puts
/// `floor(train_frac * c)` of each class in training.
pub fn balanced_holdout_by_class(
    by_class: &[Vec<usize>],
    train_frac: f64,
    repeats: usize,
    seed: u64,
) -> Result<Vec<Holdout>> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::Config(format!("train_frac must be in (0, 1), got {train_frac}")));
    }
    if repeats == 0 {
        return Err(Error::Config("repeats must be positive".into()));
    }
    if by_class.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for (c, members) in by_class.iter().enumerate() {
        if members.len() < MIN_PER_CLASS {
            return Err(Error::InsufficientData(format!(
                "class {c} has {} instances, at least {MIN_PER_CLASS} required",
                members.len()
            )));
        }
    }
    let minority = by_class.iter().map(Vec::len).min().unwrap_or(0);
    let n_train = (train_frac * minority as f64 + 1e-9).floor() as usize;
    if n_train == 0 || n_train == minority {
        return Err(Error::Config(format!(
            "train_frac {train_frac} leaves an empty split for {minority} per class"
        )));
    }
    Ok((0..repeats)
        .map(|r| {
            let mut rng = repeat_rng(seed, r as u64);
            let (mut train, mut test) = (Vec::new(), Vec::new());
            for members in by_class {
                let mut chosen: Vec<usize> = members.choose_multiple(&mut rng, minority).copied().collect();
                chosen.shuffle(&mut rng);
                train.extend_from_slice(&chosen[..n_train]);
                test.extend_from_slice(&chosen[n_train..]);
            }
            train.sort_unstable();
            test.sort_unstable();
            Holdout { train, test }
        })
        .collect())
}

pub fn balanced_holdout(ls: &Logiset, train_frac: f64, repeats: usize, seed: u64) -> Result<Vec<Holdout>> {
    balanced_holdout_by_class(&ls.indices_by_class(), train_frac, repeats, seed)
}
