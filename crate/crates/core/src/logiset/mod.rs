//! Labelled series as logical models: atoms `f(A) op a` evaluated on
//! intervals through a precomputed feature table.

pub mod atom;
pub mod dataset;
pub mod features;

pub use atom::{Atom, Op};
pub use dataset::{Logiset, LogisetInstance, Mode};
pub use features::{compute_feature, FeatureFn};
