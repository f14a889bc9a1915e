//! Rule extraction and test-set scoring.
//!
//! Each leaf yields the formula that holds exactly when routing reaches it.
//! Consecutive true edges form a chain of witnesses: `<G>(p & <AO>(q))`
//! says some `p`-interval has an AO-successor satisfying `q`. A false edge
//! asserts that no reachable world satisfies its atom, i.e. a universal over
//! the chain at that point: `[G](!p | [AO](q'))`, with `q'` the exact
//! complement of `q`. A true decision on the global relation starts a new
//! chain. Propositional rules are plain conjunctions on the full interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learner::{Decision, Model, ModelBody, TreeNode};
use crate::logic::{check_in, Formula, Interval, IntervalFrame, RelationId};
use crate::logiset::{Logiset, Mode};
use crate::par;

pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.5;
pub const DEFAULT_MIN_COVERAGE: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub antecedent: Formula,
    pub consequent: usize,
    pub coverage: usize,
    pub confidence: f64,
}

/// Rules for every leaf, in left-first leaf order, with unset metrics.
pub fn extract_rules(tree: &TreeNode, mode: Mode) -> Vec<Rule> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(tree, mode, &mut path, &mut out);
    out
}

fn walk<'a>(node: &'a TreeNode, mode: Mode, path: &mut Vec<(&'a Decision, bool)>, out: &mut Vec<Rule>) {
    match node {
        TreeNode::Leaf { class, .. } => out.push(Rule {
            antecedent: path_formula(path, mode),
            consequent: *class,
            coverage: 0,
            confidence: 0.0,
        }),
        TreeNode::Split { decision, left, right } => {
            path.push((decision, true));
            walk(left, mode, path, out);
            path.pop();
            path.push((decision, false));
            walk(right, mode, path, out);
            path.pop();
        }
    }
}

/// The antecedent for a routing path of `(decision, outcome)` edges.
pub fn path_formula(path: &[(&Decision, bool)], mode: Mode) -> Formula {
    if mode == Mode::Propositional {
        return Formula::and(
            path.iter()
                .map(|&(d, ok)| Formula::atom(if ok { d.atom } else { d.atom.negated() }))
                .collect(),
        );
    }
    let modal = true;
    let mut parts: Vec<Formula> = Vec::new();
    let mut chain: Vec<&Decision> = Vec::new();
    // Position in `parts` reserved for the current chain's existential.
    let mut slot: Option<usize> = None;
    let flush = |chain: &[&Decision], slot: Option<usize>, parts: &mut Vec<Formula>| {
        if let Some(i) = slot {
            parts[i] = existential(chain, modal);
        }
    };
    for &(d, outcome) in path {
        if outcome {
            if d.relation == RelationId::G {
                flush(&chain, slot, &mut parts);
                chain.clear();
                slot = None;
            }
            chain.push(d);
            if slot.is_none() {
                slot = Some(parts.len());
                parts.push(Formula::True);
            }
        } else if d.relation == RelationId::G {
            parts.push(Formula::boxed(RelationId::G, Formula::atom(d.atom.negated())));
        } else {
            parts.push(universal(&chain, d, modal));
        }
    }
    flush(&chain, slot, &mut parts);
    Formula::and(parts)
}

/// Whether edge `k` of a chain moves along its relation. The first edge
/// starts from every world (or the full interval), where identity and the
/// global relation coincide.
fn steps(chain: &[&Decision], k: usize) -> Option<RelationId> {
    match chain[k].relation {
        RelationId::Id => None,
        RelationId::G if k == 0 => None,
        r => Some(r),
    }
}

fn existential(chain: &[&Decision], modal: bool) -> Formula {
    let mut f = Formula::True;
    for k in (0..chain.len()).rev() {
        f = Formula::and(vec![Formula::atom(chain[k].atom), f]);
        if let Some(r) = steps(chain, k) {
            f = Formula::diamond(r, f);
        }
    }
    if modal {
        Formula::diamond(RelationId::G, f)
    } else {
        f
    }
}

fn universal(chain: &[&Decision], last: &Decision, modal: bool) -> Formula {
    let mut f = Formula::atom(last.atom.negated());
    let tail_step = match last.relation {
        RelationId::Id => None,
        r => Some(r),
    };
    if let Some(r) = tail_step {
        f = Formula::boxed(r, f);
    }
    for k in (0..chain.len()).rev() {
        f = Formula::or(vec![Formula::atom(chain[k].atom.negated()), f]);
        if let Some(r) = steps(chain, k) {
            f = Formula::boxed(r, f);
        }
    }
    if modal {
        Formula::boxed(RelationId::G, f)
    } else {
        f
    }
}

/// Rules of a tree, or the distinct rules of all trees of a forest.
pub fn model_rules(model: &Model) -> Vec<Rule> {
    match &model.body {
        ModelBody::Tree(t) => extract_rules(t, model.mode()),
        ModelBody::Forest(f) => {
            let mut out: Vec<Rule> = Vec::new();
            for t in &f.trees {
                for r in extract_rules(&t.root, model.mode()) {
                    if !out.iter().any(|o| o.antecedent == r.antecedent && o.consequent == r.consequent) {
                        out.push(r);
                    }
                }
            }
            out
        }
    }
}

/// Instances of `ls` (at `indices`) whose full-interval evaluation
/// satisfies `rule`.
pub fn covered(rule: &Formula, ls: &Logiset, frame: &IntervalFrame, indices: &[usize]) -> Result<Vec<usize>> {
    let full = Interval::full(ls.series_len());
    let hits = par::map_slice(indices, |&i| check_in(rule, ls.instance(i), frame, full));
    let mut out = Vec::new();
    for (&i, h) in indices.iter().zip(hits) {
        if h? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Scores rules on `indices` of `ls` and keeps those with confidence
/// strictly above `min_confidence` and coverage strictly above
/// `min_coverage`.
pub fn rule_metrics(
    rules: &[Rule],
    ls: &Logiset,
    indices: &[usize],
    min_confidence: f64,
    min_coverage: usize,
) -> Result<Vec<Rule>> {
    let frame = IntervalFrame::new(ls.series_len())?;
    let mut out = Vec::new();
    for rule in rules {
        if rule.consequent >= ls.n_classes() {
            return Err(Error::UnknownLabel(format!("class index {}", rule.consequent)));
        }
        let hits = covered(&rule.antecedent, ls, &frame, indices)?;
        let coverage = hits.len();
        let correct = hits.iter().filter(|&&i| ls.instance(i).label() == rule.consequent).count();
        let confidence = if coverage == 0 { 0.0 } else { correct as f64 / coverage as f64 };
        if confidence > min_confidence && coverage > min_coverage {
            out.push(Rule {
                coverage,
                confidence,
                ..rule.clone()
            });
        }
    }
    Ok(out)
}
