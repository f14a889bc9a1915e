use std::cmp::Ordering;

use super::entropy::{entropy_of, split_gain};
use super::state::{Decision, InstanceState, Router};
use crate::error::{Error, Result};
use crate::logic::RelationId;
use crate::logiset::{Atom, FeatureFn, Logiset, Op};
use crate::par;

/// The decisions a node may consider.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSpace {
    pub relations: Vec<RelationId>,
    pub functions: Vec<FeatureFn>,
    pub attributes: Vec<usize>,
}

/// Winning decision with its gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub decision: Decision,
    pub gain: f64,
}

/// Deterministic tie-break key: relation, attribute, function, operator,
/// threshold.
pub fn decision_order(a: &Decision, b: &Decision) -> Ordering {
    (a.relation, a.atom.attr, a.atom.func, a.atom.op)
        .cmp(&(b.relation, b.atom.attr, b.atom.func, b.atom.op))
        .then(a.atom.threshold.total_cmp(&b.atom.threshold))
}

/// True when `a` beats `b`: strictly higher gain, or equal gain and an
/// earlier decision.
pub fn better(a: &Split, b: &Split) -> bool {
    a.gain > b.gain || (a.gain == b.gain && decision_order(&a.decision, &b.decision) == Ordering::Less)
}

fn pick(a: Option<Split>, b: Option<Split>) -> Option<Split> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exhaustive search for the highest-gain decision over `space`.
///
/// Thresholds are the distinct feature values at the worlds reachable from
/// each instance's current state. Only splits with both children non-empty
/// are considered. Returns `None` for a pure node or when no candidate
/// separates the instances.
pub fn best_split(
    ls: &Logiset,
    router: &Router,
    indices: &[usize],
    states: &[InstanceState],
    space: &CandidateSpace,
) -> Result<Option<Split>> {
    if indices.len() != states.len() {
        return Err(Error::invalid("indices and states differ in length"));
    }
    if indices.len() < 2 {
        return Ok(None);
    }
    let k = ls.n_classes();
    let labels: Vec<usize> = indices.iter().map(|&i| ls.instance(i).label()).collect();
    let mut parent = vec![0usize; k];
    for &l in &labels {
        parent[l] += 1;
    }
    let parent_h = entropy_of(&parent, indices.len());
    if parent_h == 0.0 {
        return Ok(None);
    }

    let mut best = None;
    for &r in &space.relations {
        let reach: Vec<Vec<usize>> = states
            .iter()
            .map(|s| router.reachable(r, s).map(|w| w.iter().collect()))
            .collect::<Result<_>>()?;
        let per_attr = par::map_slice(&space.attributes, |&attr| {
            let mut local: Option<Split> = None;
            for &func in &space.functions {
                let ctx = Sweep {
                    relation: r,
                    func,
                    attr,
                    labels: &labels,
                    parent: &parent,
                    parent_h,
                };
                let extremes: Vec<Option<(f64, f64)>> = indices
                    .iter()
                    .zip(&reach)
                    .map(|(&i, worlds)| {
                        let col = ls.instance(i).column(func, attr);
                        worlds.iter().map(|&v| col[v]).fold(None, |acc, x| match acc {
                            None => Some((x, x)),
                            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
                        })
                    })
                    .collect();
                let mut thresholds: Vec<f64> = indices
                    .iter()
                    .zip(&reach)
                    .flat_map(|(&i, worlds)| {
                        let col = ls.instance(i).column(func, attr);
                        worlds.iter().map(move |&v| col[v])
                    })
                    .collect();
                thresholds.sort_by(f64::total_cmp);
                thresholds.dedup_by(|a, b| a == b);
                local = pick(local, ctx.sweep_ge(&extremes, &thresholds));
                local = pick(local, ctx.sweep_le(&extremes, &thresholds));
            }
            local
        });
        for s in per_attr {
            best = pick(best, s);
        }
    }
    Ok(best)
}

struct Sweep<'a> {
    relation: RelationId,
    func: FeatureFn,
    attr: usize,
    labels: &'a [usize],
    parent: &'a [usize],
    parent_h: f64,
}

impl Sweep<'_> {
    fn consider(&self, best: &mut Option<Split>, op: Op, t: f64, yes: &[usize], n_yes: usize) {
        let n = self.labels.len();
        if n_yes == 0 || n_yes == n {
            return;
        }
        let no: Vec<usize> = self.parent.iter().zip(yes).map(|(p, y)| p - y).collect();
        let gain = split_gain(self.parent_h, yes, &no);
        let cand = Split {
            decision: Decision::new(self.relation, Atom::new(self.func, self.attr, op, t)),
            gain,
        };
        // Thresholds ascend, so a tie keeps the earlier one.
        if best.as_ref().is_none_or(|b| gain > b.gain) {
            *best = Some(cand);
        }
    }

    /// `>= t` holds iff the reachable maximum is at least `t`.
    fn sweep_ge(&self, extremes: &[Option<(f64, f64)>], thresholds: &[f64]) -> Option<Split> {
        let mut order: Vec<(f64, usize)> = extremes
            .iter()
            .zip(self.labels)
            .filter_map(|(e, &l)| e.map(|(_, hi)| (hi, l)))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut yes = vec![0usize; self.parent.len()];
        for &(_, l) in &order {
            yes[l] += 1;
        }
        let mut n_yes = order.len();
        let mut p = 0;
        let mut best = None;
        for &t in thresholds {
            while p < order.len() && order[p].0 < t {
                yes[order[p].1] -= 1;
                n_yes -= 1;
                p += 1;
            }
            self.consider(&mut best, Op::Ge, t, &yes, n_yes);
        }
        best
    }

    /// `<= t` holds iff the reachable minimum is at most `t`.
    fn sweep_le(&self, extremes: &[Option<(f64, f64)>], thresholds: &[f64]) -> Option<Split> {
        let mut order: Vec<(f64, usize)> = extremes
            .iter()
            .zip(self.labels)
            .filter_map(|(e, &l)| e.map(|(lo, _)| (lo, l)))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut yes = vec![0usize; self.parent.len()];
        let mut n_yes = 0;
        let mut p = 0;
        let mut best = None;
        for &t in thresholds {
            while p < order.len() && order[p].0 <= t {
                yes[order[p].1] += 1;
                n_yes += 1;
                p += 1;
            }
            self.consider(&mut best, Op::Le, t, &yes, n_yes);
        }
        best
    }
}
