use std::f64::consts::PI;
use std::path::Path;

use modal_audio::io::*;

fn write_tone(path: &Path, freq: f64, rate: u32, secs: f64) {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for i in 0..(rate as f64 * secs) as usize {
        let v = 0.4 * (2.0 * PI * freq * i as f64 / rate as f64).sin();
        w.write_sample((v * 32767.0) as i16).unwrap();
    }
    w.finalize().unwrap();
}

fn manifest(dir: &Path, rows: &[(&str, f64, f64, &str)]) -> Vec<ManifestEntry> {
    let mut text = String::from("path,label\n");
    for (name, freq, secs, label) in rows {
        if *secs > 0.0 {
            write_tone(&dir.join(name), *freq, 16000, *secs);
        }
        text.push_str(&format!("{name},{label}\n"));
    }
    std::fs::write(dir.join("m.csv"), text).unwrap();
    read_manifest(&dir.join("m.csv")).unwrap()
}

#[test]
fn four_tones_default_shape() {
    let dir = tempfile::tempdir().unwrap();
    let entries = manifest(
        dir.path(),
        &[("a.wav", 440.0, 0.5, "x"), ("b.wav", 880.0, 0.7, "y"), ("c.wav", 300.0, 0.6, "x"), ("d.wav", 1200.0, 0.9, "y")],
    );
    let out = featurize_entries(&entries, &ExperimentConfig::default()).unwrap();
    assert_eq!(out.n_failed(), 0);
    assert_eq!(out.target_samples, 4000);
    let ds = out.dataset.unwrap();
    assert_eq!((ds.len(), ds.attributes.len(), ds.series_len), (4, 77, 5));
    assert_eq!(ds.classes, vec!["x", "y"]);
    assert_eq!(ds.instances.iter().map(|i| i.1).collect::<Vec<_>>(), vec![0, 1, 0, 1]);

    let path = dir.path().join("cube.mtsd");
    ds.write(&path).unwrap();
    assert_eq!(CubeDataset::read(&path).unwrap(), ds);
}

#[test]
fn clip_seconds_equalizes_and_pads() {
    let dir = tempfile::tempdir().unwrap();
    let entries = manifest(dir.path(), &[("a.wav", 440.0, 0.3, "x"), ("b.wav", 880.0, 1.1, "y")]);
    let cfg = ExperimentConfig {
        clip_seconds: Some(0.5),
        ..ExperimentConfig::default()
    };
    let out = featurize_entries(&entries, &cfg).unwrap();
    assert_eq!(out.target_samples, 4000);
    assert!(matches!(out.files[0].status, FileStatus::Ok { padded: true, .. }));
    assert!(matches!(out.files[1].status, FileStatus::Ok { padded: false, .. }));
    assert!(out.report_text().contains("warning: zero-padded"));
    assert_eq!(out.dataset.unwrap().series_len, 5);
}

#[test]
fn missing_file_is_reported_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows: Vec<(String, f64, f64, &str)> =
        (0..9).map(|i| (format!("t{i}.wav"), 300.0 + 100.0 * i as f64, 0.4, "x")).collect();
    rows.push(("gone.wav".into(), 0.0, 0.0, "y"));
    let rows: Vec<(&str, f64, f64, &str)> = rows.iter().map(|(n, f, s, l)| (n.as_str(), *f, *s, *l)).collect();
    let entries = manifest(dir.path(), &rows);
    let out = featurize_entries(&entries, &ExperimentConfig::default()).unwrap();
    assert_eq!(out.n_failed(), 1);
    assert!(!out.too_many_failures());
    assert_eq!(out.dataset.as_ref().unwrap().len(), 9);
    assert_eq!(out.dataset.as_ref().unwrap().classes, vec!["x", "y"]);
    let report = out.report_text();
    assert!(report.lines().any(|l| l.starts_with("failed") && l.contains("gone.wav")));

    let entries = manifest(dir.path(), &[("t0.wav", 300.0, 0.4, "x"), ("nope.wav", 0.0, 0.0, "y")]);
    assert!(featurize_entries(&entries, &ExperimentConfig::default()).unwrap().too_many_failures());
}

#[test]
fn atomic_write_replaces() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("sub/out.txt");
    write_atomic(&p, b"one").unwrap();
    write_atomic(&p, b"two").unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), b"two");
    assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
}
