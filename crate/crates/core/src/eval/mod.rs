//! Balanced repeated holdout, agreement metrics, and rule extraction.

mod holdout;
mod metrics;
mod protocol;
mod report;
mod rules;

pub use holdout::{balanced_holdout, balanced_holdout_by_class, repeat_rng, Holdout, MIN_PER_CLASS};
pub use metrics::{mean_std, ConfusionMatrix};
pub use protocol::{evaluate, repeat_learn_seed, run_holdout, MetricsReport, Protocol, RepeatMetrics, Summary};
pub use report::{write_metrics_csv, write_rules_csv};
pub use rules::{
    covered, extract_rules, model_rules, path_formula, rule_metrics, Rule, DEFAULT_MIN_CONFIDENCE,
    DEFAULT_MIN_COVERAGE,
};
