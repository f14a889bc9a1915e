use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::RelationId;
use crate::logiset::{FeatureFn, Mode};

/// Learning hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnParams {
    pub mode: Mode,
    pub min_gain: f64,
    pub max_leaf_entropy: f64,
    /// Relations available below the root (identity is always added).
    pub relations: Vec<RelationId>,
    pub functions: Vec<FeatureFn>,
    pub n_trees: usize,
    pub instance_frac: f64,
    pub attr_frac: f64,
    pub seed: u64,
}

impl Default for LearnParams {
    fn default() -> Self {
        Self {
            mode: Mode::Modal,
            min_gain: 0.01,
            max_leaf_entropy: 0.6,
            relations: RelationId::HS7.to_vec(),
            functions: FeatureFn::ALL.to_vec(),
            n_trees: 100,
            instance_frac: 0.7,
            attr_frac: 0.5,
            seed: 0,
        }
    }
}

impl LearnParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("instance_frac", self.instance_frac), ("attr_frac", self.attr_frac)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Config(format!("{name} must be in (0, 1], got {v}")));
            }
        }
        if !(self.min_gain >= 0.0) {
            return Err(Error::Config(format!("min_gain must be >= 0, got {}", self.min_gain)));
        }
        if !(self.max_leaf_entropy >= 0.0) {
            return Err(Error::Config(format!(
                "max_leaf_entropy must be >= 0, got {}",
                self.max_leaf_entropy
            )));
        }
        if self.functions.is_empty() {
            return Err(Error::Config("no feature functions selected".into()));
        }
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be positive".into()));
        }
        Ok(())
    }

    /// Relations searched at a node below the root.
    pub fn inner_relations(&self) -> Vec<RelationId> {
        match self.mode {
            Mode::Propositional => vec![RelationId::Id],
            Mode::Modal => {
                let mut rs: Vec<RelationId> = std::iter::once(RelationId::Id)
                    .chain(self.relations.iter().copied())
                    .collect();
                rs.sort();
                rs.dedup();
                rs
            }
        }
    }

    pub fn root_relations(&self) -> Vec<RelationId> {
        match self.mode {
            Mode::Propositional => vec![RelationId::Id],
            Mode::Modal => vec![RelationId::G],
        }
    }
}
