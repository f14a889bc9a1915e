use super::entropy::{entropy_of, majority};
use super::params::LearnParams;
use super::split::{best_split, CandidateSpace};
use super::state::{Decision, InstanceState, Router};
use crate::error::{Error, Result};
use crate::logiset::{Logiset, LogisetInstance};

/// A decision tree node. `left` is taken when the decision holds.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        class: usize,
        histogram: Vec<usize>,
    },
    Split {
        decision: Decision,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(histogram: Vec<usize>) -> Self {
        TreeNode::Leaf {
            class: majority(&histogram),
            histogram,
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Leaves in left-first order.
    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        fn walk<'a>(n: &'a TreeNode, out: &mut Vec<&'a TreeNode>) {
            match n {
                TreeNode::Leaf { .. } => out.push(n),
                TreeNode::Split { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// Every decision in the tree, pre-order.
    pub fn decisions(&self) -> Vec<&Decision> {
        let mut out = Vec::new();
        fn walk<'a>(n: &'a TreeNode, out: &mut Vec<&'a Decision>) {
            if let TreeNode::Split { decision, left, right } = n {
                out.push(decision);
                walk(left, out);
                walk(right, out);
            }
        }
        walk(self, &mut out);
        out
    }
}

/// Outcome of routing one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    /// Left-first index of the reached leaf.
    pub leaf: usize,
    pub class: usize,
    /// Branch outcomes from the root.
    pub path: Vec<bool>,
}

/// Grows a single tree on the whole logiset.
pub fn learn_tree(ls: &Logiset, params: &LearnParams) -> Result<TreeNode> {
    params.validate()?;
    let router = Router::new(ls.mode(), ls.series_len())?;
    let indices: Vec<usize> = (0..ls.len()).collect();
    let attrs: Vec<usize> = (0..ls.n_attributes()).collect();
    learn_tree_on(ls, &router, &indices, &attrs, params, params.min_gain, params.max_leaf_entropy)
}

pub(crate) fn learn_tree_on(
    ls: &Logiset,
    router: &Router,
    indices: &[usize],
    attributes: &[usize],
    params: &LearnParams,
    min_gain: f64,
    max_leaf_entropy: f64,
) -> Result<TreeNode> {
    if indices.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if ls.mode() != params.mode {
        return Err(Error::Config(format!(
            "logiset is {} but params request {}",
            ls.mode(),
            params.mode
        )));
    }
    let grower = Grower {
        ls,
        router,
        root: CandidateSpace {
            relations: params.root_relations(),
            functions: params.functions.clone(),
            attributes: attributes.to_vec(),
        },
        inner: CandidateSpace {
            relations: params.inner_relations(),
            functions: params.functions.clone(),
            attributes: attributes.to_vec(),
        },
        min_gain,
        max_leaf_entropy,
    };
    let states = vec![router.initial_state(); indices.len()];
    grower.grow(indices.to_vec(), states, true)
}

struct Grower<'a> {
    ls: &'a Logiset,
    router: &'a Router,
    root: CandidateSpace,
    inner: CandidateSpace,
    min_gain: f64,
    max_leaf_entropy: f64,
}

impl Grower<'_> {
    fn grow(&self, indices: Vec<usize>, states: Vec<InstanceState>, at_root: bool) -> Result<TreeNode> {
        let mut histogram = vec![0usize; self.ls.n_classes()];
        for &i in &indices {
            histogram[self.ls.instance(i).label()] += 1;
        }
        let h = entropy_of(&histogram, indices.len());
        if h <= self.max_leaf_entropy {
            return Ok(TreeNode::leaf(histogram));
        }
        let space = if at_root { &self.root } else { &self.inner };
        let split = match best_split(self.ls, self.router, &indices, &states, space)? {
            Some(s) if s.gain >= self.min_gain => s,
            _ => return Ok(TreeNode::leaf(histogram)),
        };
        let (mut li, mut ls_, mut ri, mut rs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (&i, s) in indices.iter().zip(&states) {
            let (ok, next) = self.router.apply_decision(&split.decision, self.ls.instance(i), s)?;
            if ok {
                li.push(i);
                ls_.push(next);
            } else {
                ri.push(i);
                rs.push(next);
            }
        }
        debug_assert!(!li.is_empty() && !ri.is_empty());
        Ok(TreeNode::Split {
            decision: split.decision,
            left: Box::new(self.grow(li, ls_, false)?),
            right: Box::new(self.grow(ri, rs, false)?),
        })
    }
}

/// Routes `inst` from the initial state to a leaf.
pub fn route(tree: &TreeNode, router: &Router, inst: &LogisetInstance) -> Result<Route> {
    router.check_instance(inst)?;
    let mut state = router.initial_state();
    let mut node = tree;
    let mut path = Vec::new();
    let mut leaf = 0;
    loop {
        match node {
            TreeNode::Leaf { class, .. } => {
                return Ok(Route {
                    leaf,
                    class: *class,
                    path,
                })
            }
            TreeNode::Split { decision, left, right } => {
                let (ok, next) = router.apply_decision(decision, inst, &state)?;
                path.push(ok);
                state = next;
                if ok {
                    node = left;
                } else {
                    leaf += left.n_leaves();
                    node = right;
                }
            }
        }
    }
}

pub fn predict_tree(tree: &TreeNode, router: &Router, inst: &LogisetInstance) -> Result<usize> {
    Ok(route(tree, router, inst)?.class)
}
