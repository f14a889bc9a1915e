use std::io::Write;

use super::protocol::MetricsReport;
use super::rules::Rule;
use crate::error::{Error, Result};

fn num(v: f64) -> String {
    format!("{v:.4}")
}

/// Metrics CSV: one row per repeat, then `mean` and `std` rows.
pub fn write_metrics_csv<W: Write>(out: W, task: &str, mode: &str, model: &str, report: &MetricsReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["task", "mode", "model", "repeat", "kappa", "accuracy", "leaves"])?;
    for (i, r) in report.repeats.iter().enumerate() {
        w.write_record([task, mode, model, &i.to_string(), &num(r.kappa), &num(r.accuracy), &num(r.leaves)])?;
    }
    for (label, pick) in [("mean", 0), ("std", 1)] {
        let f = |s: &super::protocol::Summary| num(if pick == 0 { s.mean } else { s.std });
        w.write_record([task, mode, model, label, &f(&report.kappa), &f(&report.accuracy), &f(&report.leaves)])?;
    }
    w.flush()?;
    Ok(())
}

/// Rules CSV with formula-syntax antecedents and class-name consequents.
pub fn write_rules_csv<W: Write>(out: W, rules: &[Rule], attributes: &[String], classes: &[String]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["antecedent", "consequent", "coverage", "confidence"])?;
    for r in rules {
        let class = classes
            .get(r.consequent)
            .ok_or_else(|| Error::UnknownLabel(format!("class index {}", r.consequent)))?;
        w.write_record([
            r.antecedent.display(attributes).to_string(),
            class.clone(),
            r.coverage.to_string(),
            num(r.confidence),
        ])?;
    }
    w.flush()?;
    Ok(())
}
