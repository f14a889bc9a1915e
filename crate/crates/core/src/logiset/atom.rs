use std::fmt;

use serde::{Deserialize, Serialize};

use super::features::FeatureFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Op {
    pub const ALL: [Op; 2] = [Op::Le, Op::Ge];

    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Op::Le => value <= threshold,
            Op::Ge => value >= threshold,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Op::Le => "<=",
            Op::Ge => ">=",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `func(attribute) op threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub func: FeatureFn,
    pub attr: usize,
    pub op: Op,
    pub threshold: f64,
}

impl Atom {
    pub fn new(func: FeatureFn, attr: usize, op: Op, threshold: f64) -> Self {
        Self {
            func,
            attr,
            op,
            threshold,
        }
    }

    pub fn holds(&self, value: f64) -> bool {
        self.op.holds(value, self.threshold)
    }

    /// The exact complement, expressed with the opposite operator at the
    /// adjacent representable threshold: `!(v >= t)` is `v <= prev(t)`.
    pub fn negated(&self) -> Self {
        let (op, threshold) = match self.op {
            Op::Ge => (Op::Le, self.threshold.next_down()),
            Op::Le => (Op::Ge, self.threshold.next_up()),
        };
        Self { op, threshold, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_exact_complement() {
        let a = Atom::new(FeatureFn::Mean, 0, Op::Ge, 0.3);
        let n = a.negated();
        for v in [0.3, 0.3f64.next_down(), 0.3f64.next_up(), 0.0, 1.0] {
            assert_ne!(a.holds(v), n.holds(v), "{v}");
        }
        assert_eq!(n.negated(), a);
    }
}
