//! Files: feature-cube container, experiment config, manifests, and batch
//! featurization.

mod batch;
mod config;
mod cubefile;
mod manifest;

use std::io::Write;
use std::path::Path;

pub use batch::{featurize_entries, BatchOutput, FileReport, FileStatus, MAX_FAILURE_RATE};
pub use config::ExperimentConfig;
pub use cubefile::{CubeDataset, MAGIC};
pub use manifest::{label_vocabulary, parse_manifest, read_manifest, ManifestEntry};

use crate::error::Result;

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}
