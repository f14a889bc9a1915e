use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::params::LearnParams;
use super::state::Router;
use super::tree::{learn_tree_on, predict_tree, TreeNode};
use crate::error::{Error, Result};
use crate::logiset::{Logiset, LogisetInstance};
use crate::par;

/// One forest member with the attributes it was allowed to use.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestTree {
    pub attributes: Vec<usize>,
    pub root: TreeNode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub trees: Vec<ForestTree>,
    pub seed: u64,
}

/// Deterministic generator for tree `t` of a forest seeded with `seed`.
pub fn tree_rng(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

/// `ceil(frac * n)`, at least 1 and at most `n`.
pub fn sample_size(frac: f64, n: usize) -> usize {
    ((frac * n as f64 - 1e-9).ceil() as usize).clamp(1, n)
}

fn sorted_sample(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

/// Grows `params.n_trees` fully grown trees on instance and attribute
/// subsamples drawn without replacement.
pub fn learn_forest(ls: &Logiset, params: &LearnParams) -> Result<Forest> {
    params.validate()?;
    if ls.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let router = Router::new(ls.mode(), ls.series_len())?;
    let m = ls.len();
    let n = ls.n_attributes();
    let k_inst = sample_size(params.instance_frac, m);
    let k_attr = sample_size(params.attr_frac, n);
    let trees = par::map_range(params.n_trees, |t| -> Result<ForestTree> {
        let mut rng = tree_rng(params.seed, t as u64);
        let instances = sorted_sample(&mut rng, m, k_inst);
        let attributes = sorted_sample(&mut rng, n, k_attr);
        let root = learn_tree_on(ls, &router, &instances, &attributes, params, 0.0, 0.0)?;
        Ok(ForestTree { attributes, root })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(Forest {
        trees,
        seed: params.seed,
    })
}

/// Plurality vote; ties go to the lowest class index.
pub fn predict_forest(forest: &Forest, router: &Router, inst: &LogisetInstance, n_classes: usize) -> Result<usize> {
    let mut votes = vec![0usize; n_classes];
    for t in &forest.trees {
        let c = predict_tree(&t.root, router, inst)?;
        *votes
            .get_mut(c)
            .ok_or_else(|| Error::Model(format!("leaf class {c} out of range")))? += 1;
    }
    Ok(super::entropy::majority(&votes))
}
