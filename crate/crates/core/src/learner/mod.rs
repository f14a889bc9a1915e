//! Greedy induction of propositional and modal decision trees and forests.
//!
//! An instance descends a modal tree carrying a set of current worlds. A
//! decision `<R>(atom)` holds when some world reachable through `R` satisfies
//! the atom; the true branch continues from exactly those witnesses, the
//! false branch keeps the worlds unchanged. Modal routing starts from every
//! interval and the root decision uses the global relation; propositional
//! routing stays on the full interval with the identity relation.

mod entropy;
mod forest;
mod model;
mod params;
mod split;
mod state;
mod tree;

pub use entropy::{entropy, majority, split_gain};
pub use forest::{learn_forest, predict_forest, sample_size, tree_rng, Forest, ForestTree};
pub use model::{Model, ModelBody, ModelKind, SCHEMA_VERSION};
pub use params::LearnParams;
pub use split::{best_split, better, decision_order, CandidateSpace, Split};
pub use state::{Decision, InstanceState, Router, WorldSet};
pub use tree::{learn_tree, predict_tree, route, Route, TreeNode};
