use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strict interval `(x, y)` over endpoints `0..=T`, covering the points
/// `x+1..=y` (zero-based series indices `x..y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub x: usize,
    pub y: usize,
}

impl Interval {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        if x < y {
            Ok(Self { x, y })
        } else {
            Err(Error::invalid(format!("interval ({x},{y}) is not strict")))
        }
    }

    /// The interval spanning a whole series of `len` points.
    pub fn full(len: usize) -> Self {
        Self { x: 0, y: len }
    }

    pub fn len(&self) -> usize {
        self.y - self.x
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn fits(&self, len: usize) -> bool {
        self.x < self.y && self.y <= len
    }

    /// Position of this interval in the lexicographic enumeration for a
    /// series of `len` points.
    pub fn index(&self, len: usize) -> usize {
        let x = self.x;
        x * len - x * x.saturating_sub(1) / 2 + (self.y - x - 1)
    }

    /// Inverse of [`Interval::index`].
    pub fn from_index(index: usize, len: usize) -> Self {
        let mut rest = index;
        let mut x = 0;
        while rest >= len - x {
            rest -= len - x;
            x += 1;
        }
        Self { x, y: x + 1 + rest }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn interval_count(len: usize) -> usize {
    len * (len + 1) / 2
}

/// All strict intervals over a series of `len` points, in lexicographic order.
pub fn enumerate_intervals(len: usize) -> Result<Vec<Interval>> {
    if len == 0 {
        return Err(Error::invalid("series length must be positive"));
    }
    Ok((0..len)
        .flat_map(|x| (x + 1..=len).map(move |y| Interval { x, y }))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_intervals(1).unwrap(), vec![Interval { x: 0, y: 1 }]);
        assert_eq!(
            enumerate_intervals(2).unwrap(),
            vec![
                Interval { x: 0, y: 1 },
                Interval { x: 0, y: 2 },
                Interval { x: 1, y: 2 }
            ]
        );
        assert_eq!(enumerate_intervals(5).unwrap().len(), 15);
        assert!(enumerate_intervals(0).is_err());
    }

    #[test]
    fn counts_and_indices() {
        for len in 1..=10 {
            let all = enumerate_intervals(len).unwrap();
            assert_eq!(all.len(), len * (len + 1) / 2);
            assert_eq!(all.len(), interval_count(len));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            for (i, w) in all.iter().enumerate() {
                assert_eq!(w.index(len), i);
                assert_eq!(Interval::from_index(i, len), *w);
            }
        }
    }

    #[test]
    fn strictness() {
        assert!(Interval::new(2, 2).is_err());
        assert!(Interval::new(3, 1).is_err());
        assert_eq!(Interval::new(1, 3).unwrap().len(), 2);
    }
}
