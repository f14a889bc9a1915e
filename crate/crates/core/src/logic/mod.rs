//! Interval temporal logic over finite series.

pub mod check;
pub mod formula;
pub mod interval;
pub mod relation;

pub use check::{check, check_in, IntervalModel};
pub use formula::Formula;
pub use interval::{enumerate_intervals, interval_count, Interval};
pub use relation::{accessible, relates, IntervalFrame, RelationId};
