use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{Interval, IntervalFrame, RelationId};
use crate::logiset::{Atom, LogisetInstance, Mode};

/// Set of world indices (bitset).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    bits: Vec<u64>,
}

impl WorldSet {
    pub fn empty(n_worlds: usize) -> Self {
        Self {
            bits: vec![0; n_worlds.div_ceil(64)],
        }
    }

    pub fn full(n_worlds: usize) -> Self {
        let mut s = Self::empty(n_worlds);
        for i in 0..n_worlds {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i / 64).is_some_and(|b| b & (1 << (i % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(64 * k + t)
                }
            })
        })
    }

    fn union_with(&mut self, other: &WorldSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }
}

/// The current witness worlds of one instance while it descends a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceState {
    pub worlds: WorldSet,
}

/// A split test: `<relation>(atom)` from the current worlds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub relation: RelationId,
    pub atom: Atom,
}

impl Decision {
    pub fn new(relation: RelationId, atom: Atom) -> Self {
        Self { relation, atom }
    }
}

/// Accessibility context for routing instances of one series length.
#[derive(Debug, Clone)]
pub struct Router {
    mode: Mode,
    series_len: usize,
    frame: Option<IntervalFrame>,
    /// Per relation and world: successor bitset.
    succ_sets: Vec<Vec<WorldSet>>,
}

impl Router {
    pub fn new(mode: Mode, series_len: usize) -> Result<Self> {
        let (frame, succ_sets) = match mode {
            Mode::Modal => {
                let frame = IntervalFrame::new(series_len)?;
                let n = frame.n_worlds();
                let sets = RelationId::ALL
                    .iter()
                    .map(|&r| {
                        (0..n)
                            .map(|w| {
                                let mut s = WorldSet::empty(n);
                                for &v in frame.successors(r, w) {
                                    s.insert(v as usize);
                                }
                                s
                            })
                            .collect()
                    })
                    .collect();
                (Some(frame), sets)
            }
            Mode::Propositional => (None, Vec::new()),
        };
        Ok(Self {
            mode,
            series_len,
            frame,
            succ_sets,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }

    pub fn n_worlds(&self) -> usize {
        self.frame.as_ref().map_or(1, IntervalFrame::n_worlds)
    }

    pub fn world(&self, index: usize) -> Interval {
        match &self.frame {
            Some(f) => f.intervals()[index],
            None => Interval::full(self.series_len),
        }
    }

    /// Every world in modal mode; the full interval in propositional mode.
    pub fn initial_state(&self) -> InstanceState {
        InstanceState {
            worlds: WorldSet::full(self.n_worlds()),
        }
    }

    /// Worlds reachable from `state` through `r`. The global relation ignores
    /// the current worlds.
    pub fn reachable(&self, r: RelationId, state: &InstanceState) -> Result<WorldSet> {
        let n = self.n_worlds();
        if self.mode == Mode::Propositional {
            return match r {
                RelationId::Id | RelationId::G => Ok(state.worlds.clone()),
                other => Err(Error::invalid(format!(
                    "relation {other} is not available in propositional mode"
                ))),
            };
        }
        if r == RelationId::G {
            return Ok(WorldSet::full(n));
        }
        let mut out = WorldSet::empty(n);
        for w in state.worlds.iter() {
            out.union_with(&self.succ_sets[r as usize][w]);
        }
        Ok(out)
    }

    /// Tests `decision` on `inst`: true when some reachable world satisfies
    /// the atom, in which case the new state holds exactly those witnesses.
    /// A false outcome leaves the state unchanged.
    pub fn apply_decision(
        &self,
        decision: &Decision,
        inst: &LogisetInstance,
        state: &InstanceState,
    ) -> Result<(bool, InstanceState)> {
        self.check_instance(inst)?;
        let atom = &decision.atom;
        if atom.attr >= inst.cube().n_attributes() {
            return Err(Error::SchemaMismatch(format!("attribute index {}", atom.attr)));
        }
        let column = inst.column(atom.func, atom.attr);
        let reach = self.reachable(decision.relation, state)?;
        let mut witnesses = WorldSet::empty(self.n_worlds());
        for v in reach.iter() {
            if atom.holds(column[v]) {
                witnesses.insert(v);
            }
        }
        if witnesses.is_empty() {
            Ok((false, state.clone()))
        } else {
            Ok((true, InstanceState { worlds: witnesses }))
        }
    }

    pub(crate) fn check_instance(&self, inst: &LogisetInstance) -> Result<()> {
        if inst.mode() != self.mode || inst.cube().len() != self.series_len {
            return Err(Error::SchemaMismatch(format!(
                "instance ({} mode, length {}) does not match router ({} mode, length {})",
                inst.mode(),
                inst.cube().len(),
                self.mode,
                self.series_len
            )));
        }
        Ok(())
    }
}
