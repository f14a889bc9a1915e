//! Trained models and their JSON document format.
//!
//! ```json
//! {"schema_version": 1, "kind": "tree", "mode": "modal", "params": {...},
//!  "attributes": [...], "classes": [...], "series_len": 5,
//!  "tree": {"decision": {"relation": "G", "fn": "max", "attr_name": "centroid",
//!                        "op": ">=", "threshold": 812.5},
//!           "left": {"leaf": "yes", "histogram": [0, 9]},
//!           "right": {"leaf": "no", "histogram": [7, 1]}}}
//! ```
//!
//! Forests carry `"seed"` and `"trees": [{"attributes": [...], "root": node}]`
//! instead of `"tree"`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::forest::{learn_forest, predict_forest, Forest, ForestTree};
use super::params::LearnParams;
use super::state::{Decision, Router};
use super::tree::{learn_tree, predict_tree, TreeNode};
use crate::dsp::FeatureCube;
use crate::error::{Error, Result};
use crate::logic::RelationId;
use crate::logiset::{Atom, FeatureFn, Logiset, LogisetInstance, Mode, Op};
use crate::par;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Tree,
    Forest,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Tree => "tree",
            ModelKind::Forest => "forest",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(ModelKind::Tree),
            "forest" => Ok(ModelKind::Forest),
            other => Err(Error::Config(format!("unknown model kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelBody {
    Tree(TreeNode),
    Forest(Forest),
}

/// A trained tree or forest together with the schema it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub params: LearnParams,
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    pub series_len: usize,
    pub body: ModelBody,
}

impl Model {
    pub fn train(ls: &Logiset, params: &LearnParams, kind: ModelKind) -> Result<Self> {
        let body = match kind {
            ModelKind::Tree => ModelBody::Tree(learn_tree(ls, params)?),
            ModelKind::Forest => ModelBody::Forest(learn_forest(ls, params)?),
        };
        Ok(Self {
            params: params.clone(),
            attributes: ls.attributes().to_vec(),
            classes: ls.classes().to_vec(),
            series_len: ls.series_len(),
            body,
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self.body {
            ModelBody::Tree(_) => ModelKind::Tree,
            ModelBody::Forest(_) => ModelKind::Forest,
        }
    }

    pub fn mode(&self) -> Mode {
        self.params.mode
    }

    pub fn router(&self) -> Result<Router> {
        Router::new(self.mode(), self.series_len)
    }

    /// Leaves of the tree, or mean leaves per tree of a forest.
    pub fn leaf_count(&self) -> f64 {
        match &self.body {
            ModelBody::Tree(t) => t.n_leaves() as f64,
            ModelBody::Forest(f) => {
                let total: usize = f.trees.iter().map(|t| t.root.n_leaves()).sum();
                total as f64 / f.trees.len() as f64
            }
        }
    }

    pub fn predict_instance(&self, router: &Router, inst: &LogisetInstance) -> Result<usize> {
        match &self.body {
            ModelBody::Tree(t) => predict_tree(t, router, inst),
            ModelBody::Forest(f) => predict_forest(f, router, inst, self.classes.len()),
        }
    }

    /// Predicts a raw feature cube after checking its schema.
    pub fn predict_cube(&self, cube: &FeatureCube) -> Result<usize> {
        self.check_cube(cube)?;
        let inst = LogisetInstance::new(cube.clone(), 0, self.mode());
        self.predict_instance(&self.router()?, &inst)
    }

    /// Predicts the given instances of `ls`, in order.
    pub fn predict_logiset(&self, ls: &Logiset, indices: &[usize]) -> Result<Vec<usize>> {
        self.check_logiset(ls)?;
        let router = self.router()?;
        par::map_slice(indices, |&i| self.predict_instance(&router, ls.instance(i)))
            .into_iter()
            .collect()
    }

    pub fn check_cube(&self, cube: &FeatureCube) -> Result<()> {
        if cube.names() != self.attributes.as_slice() {
            return Err(Error::SchemaMismatch("cube attributes differ from the model's".into()));
        }
        if cube.len() != self.series_len {
            return Err(Error::SchemaMismatch(format!(
                "cube length {} but model expects {}",
                cube.len(),
                self.series_len
            )));
        }
        Ok(())
    }

    pub fn check_logiset(&self, ls: &Logiset) -> Result<()> {
        if ls.attributes() != self.attributes.as_slice()
            || ls.series_len() != self.series_len
            || ls.mode() != self.mode()
        {
            return Err(Error::SchemaMismatch("logiset does not match the model schema".into()));
        }
        if ls.classes() != self.classes.as_slice() {
            return Err(Error::SchemaMismatch("class list differs from the model's".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDoc {
            schema_version: SCHEMA_VERSION,
            kind: self.kind(),
            mode: self.mode(),
            params: self.params.clone(),
            attributes: self.attributes.clone(),
            classes: self.classes.clone(),
            series_len: self.series_len,
            seed: match &self.body {
                ModelBody::Forest(f) => Some(f.seed),
                ModelBody::Tree(_) => None,
            },
            tree: match &self.body {
                ModelBody::Tree(t) => Some(self.encode(t)),
                ModelBody::Forest(_) => None,
            },
            trees: match &self.body {
                ModelBody::Forest(f) => Some(
                    f.trees
                        .iter()
                        .map(|t| TreeRecord {
                            attributes: t.attributes.iter().map(|&a| self.attributes[a].clone()).collect(),
                            root: self.encode(&t.root),
                        })
                        .collect(),
                ),
                ModelBody::Tree(_) => None,
            },
        };
        let mut out = serde_json::to_string_pretty(&doc)?;
        out.push('\n');
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let doc = ModelDoc::deserialize(&mut de)?;
        de.end()?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Model(format!(
                "unsupported schema version {}",
                doc.schema_version
            )));
        }
        if doc.mode != doc.params.mode {
            return Err(Error::Model("mode disagrees with params.mode".into()));
        }
        let mut model = Model {
            params: doc.params,
            attributes: doc.attributes,
            classes: doc.classes,
            series_len: doc.series_len,
            body: ModelBody::Tree(TreeNode::leaf(vec![1])),
        };
        model.body = match doc.kind {
            ModelKind::Tree => {
                let rec = doc.tree.ok_or_else(|| Error::Model("missing `tree`".into()))?;
                ModelBody::Tree(model.decode(&rec)?)
            }
            ModelKind::Forest => {
                let recs = doc.trees.ok_or_else(|| Error::Model("missing `trees`".into()))?;
                let trees = recs
                    .iter()
                    .map(|r| {
                        let attributes = r
                            .attributes
                            .iter()
                            .map(|n| model.attr_index(n))
                            .collect::<Result<_>>()?;
                        Ok(ForestTree {
                            attributes,
                            root: model.decode(&r.root)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if trees.is_empty() {
                    return Err(Error::Model("forest without trees".into()));
                }
                ModelBody::Forest(Forest {
                    trees,
                    seed: doc.seed.unwrap_or(model.params.seed),
                })
            }
        };
        Ok(model)
    }

    fn attr_index(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::Model(format!("unknown attribute `{name}`")))
    }

    fn encode(&self, node: &TreeNode) -> NodeRecord {
        match node {
            TreeNode::Leaf { class, histogram } => NodeRecord::Leaf {
                leaf: self.classes[*class].clone(),
                histogram: histogram.clone(),
            },
            TreeNode::Split { decision, left, right } => NodeRecord::Split {
                decision: DecisionRecord {
                    relation: decision.relation.as_str().to_string(),
                    func: decision.atom.func.as_str().to_string(),
                    attr_name: self.attributes[decision.atom.attr].clone(),
                    op: decision.atom.op.as_str().to_string(),
                    threshold: decision.atom.threshold,
                },
                left: Box::new(self.encode(left)),
                right: Box::new(self.encode(right)),
            },
        }
    }

    fn decode(&self, rec: &NodeRecord) -> Result<TreeNode> {
        match rec {
            NodeRecord::Leaf { leaf, histogram } => {
                let class = self
                    .classes
                    .iter()
                    .position(|c| c == leaf)
                    .ok_or_else(|| Error::Model(format!("unknown class `{leaf}`")))?;
                if histogram.len() != self.classes.len() {
                    return Err(Error::Model("histogram length differs from class count".into()));
                }
                Ok(TreeNode::Leaf {
                    class,
                    histogram: histogram.clone(),
                })
            }
            NodeRecord::Split { decision, left, right } => {
                let op = match decision.op.as_str() {
                    "<=" => Op::Le,
                    ">=" => Op::Ge,
                    other => return Err(Error::Model(format!("unknown operator `{other}`"))),
                };
                let relation: RelationId = decision.relation.parse()?;
                let func: FeatureFn = decision.func.parse()?;
                let atom = Atom::new(func, self.attr_index(&decision.attr_name)?, op, decision.threshold);
                Ok(TreeNode::Split {
                    decision: Decision::new(relation, atom),
                    left: Box::new(self.decode(left)?),
                    right: Box::new(self.decode(right)?),
                })
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    schema_version: u32,
    kind: ModelKind,
    mode: Mode,
    params: LearnParams,
    attributes: Vec<String>,
    classes: Vec<String>,
    series_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tree: Option<NodeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trees: Option<Vec<TreeRecord>>,
}

#[derive(Serialize, Deserialize)]
struct TreeRecord {
    attributes: Vec<String>,
    root: NodeRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeRecord {
    Split {
        decision: DecisionRecord,
        left: Box<NodeRecord>,
        right: Box<NodeRecord>,
    },
    Leaf {
        leaf: String,
        histogram: Vec<usize>,
    },
}

#[derive(Serialize, Deserialize)]
struct DecisionRecord {
    relation: String,
    #[serde(rename = "fn")]
    func: String,
    attr_name: String,
    op: String,
    threshold: f64,
}
