//! Flat `key = value` experiment configuration. Blank lines and lines
//! starting with `#` are ignored; unknown keys are errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dsp::{PipelineParams, TrimParams};
use crate::error::{Error, Result};
use crate::eval::Protocol;
use crate::learner::{LearnParams, ModelKind};
use crate::logic::RelationId;
use crate::logiset::FeatureFn;
#[cfg(test)]
use crate::logiset::Mode;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub task: String,
    pub manifest: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub pipeline: PipelineParams,
    /// Target duration after preprocessing; `None` clips to the shortest file.
    pub clip_seconds: Option<f64>,
    pub model: ModelKind,
    pub learn: LearnParams,
    pub protocol: Protocol,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            task: "task".into(),
            manifest: None,
            out_dir: PathBuf::from("out"),
            pipeline: PipelineParams::default(),
            clip_seconds: None,
            model: ModelKind::Tree,
            learn: LearnParams::default(),
            protocol: Protocol::default(),
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::Config(format!("invalid value `{value}` for `{key}`"))
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| bad(key, value))
}

fn on_off(key: &str, value: &str) -> Result<bool> {
    match value {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        _ => Err(bad(key, value)),
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad(key, value)))
        .collect()
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 27] = [
        "task",
        "manifest",
        "out_dir",
        "resample_hz",
        "bandpass",
        "trim",
        "trim_frame_ms",
        "trim_threshold_db",
        "clip_seconds",
        "window_len",
        "hop",
        "n_mel",
        "n_mfcc",
        "n_points",
        "overlap",
        "mode",
        "model",
        "min_gain",
        "max_leaf_entropy",
        "relations",
        "functions",
        "n_trees",
        "instance_frac",
        "attr_frac",
        "seed",
        "train_frac",
        "repeats",
    ];

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            if !Self::KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if pairs.iter().any(|(k, _)| *k == key) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            pairs.push((key, value.trim()));
        }
        // Trim tuning applies only once trimming is switched on.
        pairs.sort_by_key(|(k, _)| k.starts_with("trim_"));
        let mut cfg = Self::default();
        for (key, value) in pairs {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key from its text value. Trim tuning keys are ignored while
    /// trimming is off.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let p = &mut self.pipeline;
        let l = &mut self.learn;
        match key {
            "task" => self.task = value.to_string(),
            "manifest" => self.manifest = (!value.is_empty()).then(|| PathBuf::from(value)),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "resample_hz" => p.resample_hz = num(key, value)?,
            "bandpass" => {
                p.bandpass = if value == "off" {
                    None
                } else {
                    let v: Vec<f64> = list(key, value)?;
                    match v.as_slice() {
                        [lo, hi] => Some((*lo, *hi)),
                        _ => return Err(bad(key, value)),
                    }
                }
            }
            "trim" => p.trim = on_off(key, value)?.then(TrimParams::default),
            "trim_frame_ms" | "trim_threshold_db" => {
                let v = num(key, value)?;
                if let Some(t) = p.trim.as_mut() {
                    if key == "trim_frame_ms" {
                        t.frame_ms = v;
                    } else {
                        t.threshold_db = v;
                    }
                }
            }
            "clip_seconds" => {
                self.clip_seconds = if value == "auto" { None } else { Some(num(key, value)?) }
            }
            "window_len" => p.window_len = num(key, value)?,
            "hop" => p.hop = num(key, value)?,
            "n_mel" => p.n_mel = num(key, value)?,
            "n_mfcc" => p.n_mfcc = num(key, value)?,
            "n_points" => p.n_points = num(key, value)?,
            "overlap" => p.overlap = num(key, value)?,
            "mode" => l.mode = value.parse().map_err(|_| bad(key, value))?,
            "model" => self.model = value.parse().map_err(|_| bad(key, value))?,
            "min_gain" => l.min_gain = num(key, value)?,
            "max_leaf_entropy" => l.max_leaf_entropy = num(key, value)?,
            "relations" => {
                let rs: Vec<RelationId> = list(key, value)?;
                l.relations = rs;
            }
            "functions" => {
                let fs: Vec<FeatureFn> = list(key, value)?;
                l.functions = fs;
            }
            "n_trees" => l.n_trees = num(key, value)?,
            "instance_frac" => l.instance_frac = num(key, value)?,
            "attr_frac" => l.attr_frac = num(key, value)?,
            "seed" => self.set_seed(num(key, value)?),
            "train_frac" => self.protocol.train_frac = num(key, value)?,
            "repeats" => self.protocol.repeats = num(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.learn.seed = seed;
        self.protocol.seed = seed;
    }

    pub fn seed(&self) -> u64 {
        self.protocol.seed
    }

    pub fn validate(&self) -> Result<()> {
        self.learn.validate()?;
        let p = &self.pipeline;
        if p.resample_hz == 0 || p.window_len < 2 || p.hop == 0 || p.n_points == 0 {
            return Err(Error::Config("resample_hz, window_len, hop and n_points must be positive".into()));
        }
        if !(0.0..1.0).contains(&p.overlap) {
            return Err(Error::Config(format!("overlap must be in [0, 1), got {}", p.overlap)));
        }
        if let Some((lo, hi)) = p.bandpass {
            if !(lo > 0.0 && lo < hi) {
                return Err(Error::Config(format!("bandpass edges {lo},{hi} out of order")));
            }
        }
        if let Some(c) = self.clip_seconds {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("clip_seconds must be positive, got {c}")));
            }
        }
        if !(self.protocol.train_frac > 0.0 && self.protocol.train_frac < 1.0) || self.protocol.repeats == 0 {
            return Err(Error::Config("train_frac must be in (0, 1) and repeats positive".into()));
        }
        if self.task.is_empty() || self.task.contains(['\n', ',']) {
            return Err(Error::Config("task name must be non-empty without commas".into()));
        }
        Ok(())
    }

    /// Text form listing every key; parsing it yields an equal config.
    pub fn to_text(&self) -> String {
        let p = &self.pipeline;
        let l = &self.learn;
        let join = |v: Vec<&str>| v.join(",");
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("task", self.task.clone());
        kv(
            "manifest",
            self.manifest.as_ref().map(|m| m.display().to_string()).unwrap_or_default(),
        );
        kv("out_dir", self.out_dir.display().to_string());
        kv("resample_hz", p.resample_hz.to_string());
        kv(
            "bandpass",
            p.bandpass.map_or("off".into(), |(lo, hi)| format!("{lo},{hi}")),
        );
        kv("trim", if p.trim.is_some() { "on" } else { "off" }.into());
        if let Some(t) = &p.trim {
            kv("trim_frame_ms", t.frame_ms.to_string());
            kv("trim_threshold_db", t.threshold_db.to_string());
        }
        kv("clip_seconds", self.clip_seconds.map_or("auto".into(), |c| c.to_string()));
        kv("window_len", p.window_len.to_string());
        kv("hop", p.hop.to_string());
        kv("n_mel", p.n_mel.to_string());
        kv("n_mfcc", p.n_mfcc.to_string());
        kv("n_points", p.n_points.to_string());
        kv("overlap", p.overlap.to_string());
        kv("mode", l.mode.to_string());
        kv("model", self.model.to_string());
        kv("min_gain", l.min_gain.to_string());
        kv("max_leaf_entropy", l.max_leaf_entropy.to_string());
        kv("relations", join(l.relations.iter().map(|r| r.as_str()).collect()));
        kv("functions", join(l.functions.iter().map(|f| f.as_str()).collect()));
        kv("n_trees", l.n_trees.to_string());
        kv("instance_frac", l.instance_frac.to_string());
        kv("attr_frac", l.attr_frac.to_string());
        kv("seed", self.protocol.seed.to_string());
        kv("train_frac", self.protocol.train_frac.to_string());
        kv("repeats", self.protocol.repeats.to_string());
        s
    }
}
