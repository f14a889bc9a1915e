use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::interval::{enumerate_intervals, Interval};
use crate::error::{Error, Result};

/// Accessibility relations between intervals: identity, the six coarse HS7
/// groups, and the global relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationId {
    Id,
    /// Later: `v` starts strictly after `w` ends.
    L,
    Linv,
    /// Meets or overlaps.
    AO,
    AOinv,
    /// Proper part: during, begins or ends.
    DBE,
    DBEinv,
    /// Global: every interval.
    G,
}

impl RelationId {
    pub const ALL: [RelationId; 8] = [
        RelationId::Id,
        RelationId::L,
        RelationId::Linv,
        RelationId::AO,
        RelationId::AOinv,
        RelationId::DBE,
        RelationId::DBEinv,
        RelationId::G,
    ];

    /// The six directional groups.
    pub const HS7: [RelationId; 6] = [
        RelationId::L,
        RelationId::Linv,
        RelationId::AO,
        RelationId::AOinv,
        RelationId::DBE,
        RelationId::DBEinv,
    ];

    pub fn inverse(self) -> Self {
        use RelationId::*;
        match self {
            Id => Id,
            L => Linv,
            Linv => L,
            AO => AOinv,
            AOinv => AO,
            DBE => DBEinv,
            DBEinv => DBE,
            G => G,
        }
    }

    pub fn as_str(self) -> &'static str {
        use RelationId::*;
        match self {
            Id => "Id",
            L => "L",
            Linv => "Linv",
            AO => "AO",
            AOinv => "AOinv",
            DBE => "DBE",
            DBEinv => "DBEinv",
            G => "G",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelationId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown relation {s:?}")))
    }
}

/// Whether `v` is accessible from `w` under `r`.
pub fn relates(r: RelationId, w: Interval, v: Interval) -> bool {
    use RelationId::*;
    match r {
        Id => v == w,
        L => w.y < v.x,
        Linv => v.y < w.x,
        AO => w.y == v.x || (w.x < v.x && v.x < w.y && w.y < v.y),
        AOinv => relates(AO, v, w),
        DBE => w.x <= v.x && v.y <= w.y && v != w,
        DBEinv => relates(DBE, v, w),
        G => true,
    }
}

/// Intervals accessible from `w` under `r` for a series of `len` points,
/// in lexicographic order.
pub fn accessible(r: RelationId, w: Interval, len: usize) -> Result<Vec<Interval>> {
    if !w.fits(len) {
        return Err(Error::invalid(format!("interval {w} does not fit length {len}")));
    }
    Ok(enumerate_intervals(len)?
        .into_iter()
        .filter(|&v| relates(r, w, v))
        .collect())
}

/// Precomputed accessibility lists (as interval indices) for one series
/// length.
#[derive(Debug, Clone)]
pub struct IntervalFrame {
    len: usize,
    intervals: Vec<Interval>,
    /// `succ[relation][world]`: accessible world indices, ascending.
    succ: Vec<Vec<Vec<u32>>>,
}

impl IntervalFrame {
    pub fn new(len: usize) -> Result<Self> {
        let intervals = enumerate_intervals(len)?;
        let succ = RelationId::ALL
            .iter()
            .map(|&r| {
                intervals
                    .iter()
                    .map(|&w| {
                        intervals
                            .iter()
                            .enumerate()
                            .filter(|(_, &v)| relates(r, w, v))
                            .map(|(i, _)| i as u32)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            len,
            intervals,
            succ,
        })
    }

    pub fn series_len(&self) -> usize {
        self.len
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn n_worlds(&self) -> usize {
        self.intervals.len()
    }

    pub fn successors(&self, r: RelationId, world: usize) -> &[u32] {
        &self.succ[r as usize][world]
    }
}
