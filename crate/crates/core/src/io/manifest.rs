use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One `path,label` row. Relative paths resolve against the manifest's
/// directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: String,
}

/// Parses manifest CSV text. An initial `path,label` header row is skipped.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::Csv(format!("manifest row {}: expected path,label", i + 1)));
        }
        if i == 0 && &rec[0] == "path" && &rec[1] == "label" {
            continue;
        }
        if rec[0].is_empty() || rec[1].is_empty() {
            return Err(Error::Csv(format!("manifest row {}: empty field", i + 1)));
        }
        let p = Path::new(&rec[0]);
        out.push(ManifestEntry {
            path: if p.is_absolute() { p.to_path_buf() } else { base.join(p) },
            label: rec[1].to_string(),
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(out)
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path)?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Sorted distinct labels.
pub fn label_vocabulary(entries: &[ManifestEntry]) -> Vec<String> {
    let mut v: Vec<String> = entries.iter().map(|e| e.label.clone()).collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rows() {
        let text = "path,label\na.wav, yes\n/abs/b.wav,no\n\n# note\n\"c,d.wav\",yes\n";
        let rows = parse_manifest(text, Path::new("/data")).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].path, PathBuf::from("/data/a.wav"));
        assert_eq!(rows[0].label, "yes");
        assert_eq!(rows[1].path, PathBuf::from("/abs/b.wav"));
        assert_eq!(rows[2].path, PathBuf::from("/data/c,d.wav"));
        assert_eq!(label_vocabulary(&rows), vec!["no", "yes"]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_manifest("a.wav\n", Path::new(".")).is_err());
        assert!(parse_manifest("path,label\n", Path::new(".")).is_err());
        assert!(parse_manifest("a.wav,\n", Path::new(".")).is_err());
    }
}
