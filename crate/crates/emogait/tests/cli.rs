//! End-to-end tests of the `emogait` binary.

#[allow(dead_code)]
mod common;

use common::gait_params;
use emogait::features::{walk_features, MissingSidePolicy, PhaseMean};
use emogait::ingest::{self, ManifestEntry};
use emogait::preprocess::{preprocess_walk, PipelineConfig};
use emogait::skeleton::EmotionLabel;
use emogait::synth::{generate_walk, generate_walks, PathDirection, PathLeg};
use std::process::{Command, Output};

fn emogait(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emogait"))
        .args(args)
        .output()
        .expect("spawn emogait")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn demo_params() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/demo_params.toml")
}

#[test]
fn synth_extract_crossval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let corpus_str = corpus.to_str().unwrap();

    let out = emogait(&["synth", "--params", demo_params(), "--out", corpus_str]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("wrote 20 walks"));
    let csvs = std::fs::read_dir(&corpus)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name() != "manifest.csv")
        .count();
    assert_eq!(csvs, 20);

    let manifest = corpus.join("manifest.csv");
    let features = dir.path().join("features.csv");
    let out = emogait(&[
        "extract",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        features.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("extracted 20/20 walks"));
    let rows = ingest::read_features_csv(&features).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|(_, _, v)| v.values.len() == 168));

    let report = dir.path().join("report.txt");
    let out = emogait(&[
        "crossval",
        "--features",
        features.to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = stdout(&out);
    assert!(table.contains("Classifier   NaiveBayes"), "{table}");
    let accuracy: f64 = table
        .lines()
        .find_map(|l| l.strip_prefix("Accuracy(%)"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(accuracy >= 90.0, "accuracy {accuracy}");

    // Reruns are byte-identical.
    let features2 = dir.path().join("features2.csv");
    let out = emogait(&[
        "extract",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        features2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&features).unwrap(),
        std::fs::read(&features2).unwrap()
    );

    let report2 = dir.path().join("report2.txt");
    let out = emogait(&[
        "crossval",
        "--features",
        features.to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        report2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&report).unwrap(),
        std::fs::read(&report2).unwrap()
    );

    let corpus2 = dir.path().join("corpus2");
    let out = emogait(&[
        "synth",
        "--params",
        demo_params(),
        "--out",
        corpus2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for entry in std::fs::read_dir(&corpus).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(
            std::fs::read(corpus.join(&name)).unwrap(),
            std::fs::read(corpus2.join(&name)).unwrap(),
            "{name:?} differs between identical synth runs"
        );
    }
}

#[test]
fn synth_refuses_non_empty_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("existing.txt"), "x").unwrap();
    let out = emogait(&[
        "synth",
        "--params",
        demo_params(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = emogait(&[
        "synth",
        "--params",
        demo_params(),
        "--out",
        dir.path().to_str().unwrap(),
        "--force",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn synth_rejects_zero_walks_per_class() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.toml");
    let text = std::fs::read_to_string(demo_params())
        .unwrap()
        .replace("n_per_class = 10", "n_per_class = 0");
    std::fs::write(&params, text).unwrap();
    let out = emogait(&[
        "synth",
        "--params",
        params.to_str().unwrap(),
        "--out",
        dir.path().join("corpus").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extract_skips_short_walks_and_reports_them() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = emogait(&[
        "synth",
        "--params",
        demo_params(),
        "--out",
        corpus.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // A 21-frame walk cannot produce a 40-row segment.
    let mut short_params = gait_params(1.8, 0.0, 9);
    short_params.path = vec![PathLeg {
        direction: PathDirection::TowardCamera,
        seconds: 0.7,
    }];
    let short = generate_walk(&short_params, EmotionLabel::Natural, "shorty", "s", "k").unwrap();
    ingest::write_frames_csv(&corpus.join("shorty.csv"), &short).unwrap();
    let manifest_path = corpus.join("manifest.csv");
    let mut manifest = ingest::load_manifest(&manifest_path).unwrap();
    manifest.entries.push(ManifestEntry {
        walk_id: "shorty".into(),
        file_path: "shorty.csv".into(),
        subject_id: "s".into(),
        camera_id: "k".into(),
        label: EmotionLabel::Natural,
    });
    ingest::write_manifest(&manifest_path, &manifest).unwrap();

    let features = dir.path().join("features.csv");
    let out = emogait(&[
        "extract",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--out",
        features.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("extracted 20/21 walks"));
    assert_eq!(ingest::read_features_csv(&features).unwrap().len(), 20);
    let skips = std::fs::read_to_string(dir.path().join("features.skips.txt")).unwrap();
    assert!(skips.contains("skip shorty"), "{skips}");
}

#[test]
fn extract_missing_manifest_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = emogait(&[
        "extract",
        "--manifest",
        dir.path().join("nope.csv").to_str().unwrap(),
        "--out",
        dir.path().join("features.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn crossval_rejects_classes_smaller_than_fold_count() {
    let dir = tempfile::tempdir().unwrap();
    let walks = generate_walks(
        (&gait_params(1.6, 0.01, 0), EmotionLabel::Natural),
        (&gait_params(2.4, 0.01, 0), EmotionLabel::Angry),
        3,
        1,
    )
    .unwrap();
    let cfg = PipelineConfig::default();
    let rows: Vec<_> = walks
        .iter()
        .map(|w| {
            let (front, back) = preprocess_walk(w, &cfg).unwrap();
            let fv = walk_features(
                &front,
                &back,
                w.sample_rate,
                MissingSidePolicy::Reject,
                PhaseMean::Arithmetic,
            )
            .unwrap();
            (w.walk_id.clone(), w.label, fv)
        })
        .collect();
    let features = dir.path().join("features.csv");
    ingest::write_features_csv(&features, &rows).unwrap();

    let out = emogait(&[
        "crossval",
        "--features",
        features.to_str().unwrap(),
        "--folds",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ablate_prints_both_accuracies() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = emogait(&[
        "synth",
        "--params",
        demo_params(),
        "--out",
        corpus.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = emogait(&[
        "ablate",
        "--manifest",
        corpus.join("manifest.csv").to_str().unwrap(),
        "--seed",
        "7",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("Joints       14        25"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("Accuracy(%)")), "{text}");
}

#[test]
fn ablate_rejects_empty_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let manifest_path = dir.path().join("manifest.csv");
    std::fs::write(
        &manifest_path,
        "walk_id,file_path,subject_id,camera_id,label\n",
    )
    .unwrap();
    let out = emogait(&["ablate", "--manifest", manifest_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
