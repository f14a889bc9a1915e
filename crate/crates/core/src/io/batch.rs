use std::fmt::Write as _;

use super::config::ExperimentConfig;
use super::cubefile::CubeDataset;
use super::manifest::{label_vocabulary, ManifestEntry};
use crate::dsp::{decode_wav, featurize, preprocess, AudioSignal};
use crate::error::{Error, Result};
use crate::par;

/// Fraction of failed files above which featurization is an error.
pub const MAX_FAILURE_RATE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub enum FileStatus {
    Ok { seconds: f64, padded: bool },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileReport {
    pub entry: ManifestEntry,
    pub status: FileStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutput {
    /// `None` when every file failed.
    pub dataset: Option<CubeDataset>,
    pub files: Vec<FileReport>,
    pub target_samples: usize,
}

impl BatchOutput {
    pub fn n_failed(&self) -> usize {
        self.files
            .iter()
            .filter(|f| matches!(f.status, FileStatus::Failed(_)))
            .count()
    }

    pub fn failure_rate(&self) -> f64 {
        self.n_failed() as f64 / self.files.len().max(1) as f64
    }

    pub fn too_many_failures(&self) -> bool {
        self.dataset.is_none() || self.failure_rate() > MAX_FAILURE_RATE
    }

    /// Plain-text per-file status report.
    pub fn report_text(&self) -> String {
        let mut s = String::new();
        let ok = self.files.len() - self.n_failed();
        let _ = writeln!(s, "files: {}  ok: {ok}  failed: {}", self.files.len(), self.n_failed());
        let _ = writeln!(s, "target_samples: {}", self.target_samples);
        for f in &self.files {
            let path = f.entry.path.display();
            match &f.status {
                FileStatus::Ok { seconds, padded: false } => {
                    let _ = writeln!(s, "ok\t{path}\t{}\t{seconds:.3}s", f.entry.label);
                }
                FileStatus::Ok { seconds, padded: true } => {
                    let _ = writeln!(s, "ok\t{path}\t{}\t{seconds:.3}s\twarning: zero-padded", f.entry.label);
                }
                FileStatus::Failed(msg) => {
                    let _ = writeln!(s, "failed\t{path}\t{}\t{msg}", f.entry.label);
                }
            }
        }
        s
    }
}

/// Decodes, preprocesses, equalizes length and featurizes every manifest
/// row. Per-file failures are recorded and skipped.
pub fn featurize_entries(entries: &[ManifestEntry], cfg: &ExperimentConfig) -> Result<BatchOutput> {
    if entries.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let p = &cfg.pipeline;
    let stage1: Vec<Result<AudioSignal>> =
        par::map_slice(entries, |e| decode_wav(&e.path).and_then(|sig| preprocess(&sig, p)));
    let stage1: Vec<std::result::Result<AudioSignal, String>> =
        stage1.into_iter().map(|r| r.map_err(|e| e.to_string())).collect();
    let target_samples = match cfg.clip_seconds {
        Some(c) => (c * p.resample_hz as f64).round() as usize,
        None => stage1
            .iter()
            .filter_map(|r| r.as_ref().ok().map(AudioSignal::len))
            .min()
            .unwrap_or(0),
    };
    let stage2 = par::map_range(entries.len(), |i| -> std::result::Result<_, String> {
        let mut sig = stage1[i].clone()?;
        let seconds = sig.duration_secs();
        let padded = sig.fit_to_len(target_samples).map_err(|e| e.to_string())?;
        let cube = featurize(&sig, p).map_err(|e| e.to_string())?;
        Ok((cube, seconds, padded))
    });
    let classes = label_vocabulary(entries);
    let mut files = Vec::with_capacity(entries.len());
    let mut instances = Vec::new();
    for (entry, r) in entries.iter().zip(stage2) {
        let status = match r {
            Ok((cube, seconds, padded)) => {
                let label = classes.binary_search(&entry.label).expect("label in vocabulary");
                instances.push((cube, label));
                FileStatus::Ok { seconds, padded }
            }
            Err(e) => FileStatus::Failed(e),
        };
        files.push(FileReport {
            entry: entry.clone(),
            status,
        });
    }
    let dataset = if instances.is_empty() {
        None
    } else {
        Some(CubeDataset::new(classes, instances)?)
    };
    Ok(BatchOutput {
        dataset,
        files,
        target_samples,
    })
}
