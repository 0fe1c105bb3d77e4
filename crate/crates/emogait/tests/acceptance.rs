//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

mod common;

use common::{dft_oracle, gait_params, SplitMix};
use emogait::classify::{
    cross_validate, train_svm_smo, ClassifierSpec, LabeledDataset, LabeledRow, SvmParams,
};
use emogait::features::{dft, walk_features, MissingSidePolicy, PhaseMean};
use emogait::ingest;
use emogait::preprocess::{
    differentiate, gaussian_filter, preprocess_walk, PipelineConfig, DEFAULT_KERNEL,
};
use emogait::skeleton::{EmotionLabel, JointSet, PoseMatrix, Stage, Walk};
use emogait::synth::{generate_walk, generate_walks, GaitParams, SAMPLE_RATE};
use std::time::Instant;

fn matrix_from_column(values: &[f64]) -> PoseMatrix {
    let cols = JointSet::Significant14.cols();
    let mut data = Vec::with_capacity(values.len() * cols);
    for &v in values {
        data.push(v);
        data.extend(std::iter::repeat_n(0.0, cols - 1));
    }
    PoseMatrix::from_rows(
        data,
        values.len(),
        JointSet::Significant14,
        Stage::Recentred,
    )
}

fn extract_dataset(walks: &[Walk], joint_set: JointSet) -> LabeledDataset {
    let cfg = PipelineConfig {
        joint_set,
        ..PipelineConfig::default()
    };
    let rows: Vec<LabeledRow> = walks
        .iter()
        .map(|w| {
            let (front, back) = preprocess_walk(w, &cfg).expect("preprocess");
            let fv = walk_features(
                &front,
                &back,
                w.sample_rate,
                MissingSidePolicy::Reject,
                PhaseMean::Arithmetic,
            )
            .expect("features");
            LabeledRow {
                walk_id: w.walk_id.clone(),
                label: w.label,
                features: fv.values,
            }
        })
        .collect();
    LabeledDataset::new(rows).expect("dataset")
}

#[test]
fn criterion_01_pipeline_shape() {
    let start = Instant::now();
    let params = gait_params(1.8, 0.005, 3);
    let walk = generate_walk(&params, EmotionLabel::Natural, "w", "s", "k").unwrap();
    for (joint_set, expected) in [(JointSet::Significant14, 168), (JointSet::All25, 300)] {
        let cfg = PipelineConfig {
            joint_set,
            ..PipelineConfig::default()
        };
        let (front, back) = preprocess_walk(&walk, &cfg).unwrap();
        assert!(!front.is_empty() && !back.is_empty());
        let fv = walk_features(
            &front,
            &back,
            walk.sample_rate,
            MissingSidePolicy::Reject,
            PhaseMean::Arithmetic,
        )
        .unwrap();
        assert_eq!(fv.values.len(), expected);
    }
    let per_walk = start.elapsed().as_secs_f64() / 2.0;
    assert!(per_walk < 1.0, "{per_walk:.3} s/walk");
    println!(
        "[PASS] criterion 1: feature width 168 (14-joint) / 300 (25-joint), {per_walk:.3} s/walk"
    );
}

#[test]
fn criterion_02_dft_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix(0xD1CE);
    let mut lengths: Vec<usize> = vec![2, 3, 5, 7, 11, 13, 31, 61, 89, 113, 127, 128];
    while lengths.len() < 200 {
        lengths.push(2 + (rng.next_u64() % 127) as usize);
    }
    for (i, &n) in lengths.iter().enumerate() {
        let x: Vec<f64> = (0..n).map(|_| rng.next_f64() * 10.0).collect();
        let got = dft(&x).unwrap();
        let want = dft_oracle(&x);
        let scale = want
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() / scale < 1e-9, "sequence {i}, n = {n}");
        }
        let time: f64 = x.iter().map(|v| v * v).sum();
        let freq: f64 = got.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
        assert!(
            (time - freq).abs() / time.max(1.0) < 1e-9,
            "Parseval, n = {n}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "{elapsed:.2} s");
    println!("[PASS] criterion 2: DFT matches direct summation and Parseval on 200 sequences, {elapsed:.2} s");
}

#[test]
fn criterion_03_filter_diff_invariants() {
    // Constant preservation: exact.
    let constant = matrix_from_column(&[2.0; 50]);
    let filtered = gaussian_filter(&constant, &DEFAULT_KERNEL).unwrap();
    for t in 0..filtered.rows() {
        assert_eq!(filtered.get(t, 0), 2.0);
    }

    // Linearity within 1e-9.
    let mut rng = SplitMix(7);
    for _ in 0..20 {
        let n = 10 + (rng.next_u64() % 30) as usize;
        let xs: Vec<f64> = (0..n).map(|_| rng.next_f64() * 5.0).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.next_f64() * 5.0).collect();
        let (a, b) = (rng.next_f64() * 2.0, rng.next_f64() * 2.0);
        let combo: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
        let fx = gaussian_filter(&matrix_from_column(&xs), &DEFAULT_KERNEL).unwrap();
        let fy = gaussian_filter(&matrix_from_column(&ys), &DEFAULT_KERNEL).unwrap();
        let fc = gaussian_filter(&matrix_from_column(&combo), &DEFAULT_KERNEL).unwrap();
        for t in 0..fc.rows() {
            assert!((fc.get(t, 0) - (a * fx.get(t, 0) + b * fy.get(t, 0))).abs() < 1e-9);
        }
    }

    // differentiate(cumsum(x)) recovers x[1..] within 1e-12.
    for _ in 0..20 {
        let n = 2 + (rng.next_u64() % 40) as usize;
        let xs: Vec<f64> = (0..n).map(|_| rng.next_f64() * 5.0).collect();
        let mut acc = 0.0;
        let cumsum: Vec<f64> = xs
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        let d = differentiate(&matrix_from_column(&cumsum)).unwrap();
        for t in 0..d.rows() {
            assert!((d.get(t, 0) - xs[t + 1]).abs() < 1e-12);
        }
    }

    // Row-count arithmetic T -> T-4 -> T-5.
    for t in 6..60 {
        let m = matrix_from_column(&vec![0.5; t]);
        let f = gaussian_filter(&m, &DEFAULT_KERNEL).unwrap();
        let d = differentiate(&f).unwrap();
        assert_eq!((f.rows(), d.rows()), (t - 4, t - 5));
    }
    println!("[PASS] criterion 3: filter/diff invariants (constants, linearity, cumsum identity, row counts)");
}

#[test]
fn criterion_04_translation_invariance() {
    let params = gait_params(1.8, 0.01, 11);
    let base = generate_walk(&params, EmotionLabel::Natural, "w", "s", "k").unwrap();
    let mut shifted = base.clone();
    for frame in &mut shifted.frames {
        for p in &mut frame.positions {
            p[0] += 3.25;
            p[1] -= 1.5;
            p[2] += 10.0;
        }
    }
    let cfg = PipelineConfig::default();
    let (f1, b1) = preprocess_walk(&base, &cfg).unwrap();
    let (f2, b2) = preprocess_walk(&shifted, &cfg).unwrap();
    assert_eq!((f1.len(), b1.len()), (f2.len(), b2.len()));
    for (s1, s2) in f1.iter().zip(&f2).chain(b1.iter().zip(&b2)) {
        for (a, b) in s1.data.data().iter().zip(s2.data.data()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
    println!("[PASS] criterion 4: global offset changes no segment datum by more than 1e-12");
}

#[test]
fn criterion_05_frequency_recovery() {
    let start = Instant::now();
    let mut params = gait_params(1.8, 0.0, 5);
    params.phase_jitter = 0.0;
    let walk = generate_walk(&params, EmotionLabel::Natural, "w", "s", "k").unwrap();
    let (front, back) = preprocess_walk(&walk, &PipelineConfig::default()).unwrap();
    // Knee z columns in SIGNIFICANT_14 order: KneeLeft = joint 10,
    // KneeRight = joint 11.
    for seg in front.iter().chain(&back) {
        for joint in [10usize, 11] {
            let col = seg.data.column(joint * 3 + 2);
            let n = col.len() as f64;
            let (f, _) = emogait::features::main_frequency_phase(&col, SAMPLE_RATE).unwrap();
            let bin_width = SAMPLE_RATE / n;
            assert!(
                (f - 1.8).abs() <= bin_width,
                "f = {f}, bin width {bin_width}"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "{elapsed:.2} s");
    println!("[PASS] criterion 5: knee main frequency within one bin of 1.8 Hz, {elapsed:.2} s");
}

#[test]
fn criterion_06_separability_end_to_end() {
    let start = Instant::now();
    let walks = generate_walks(
        (&gait_params(1.6, 0.01, 0), EmotionLabel::Natural),
        (&gait_params(2.4, 0.01, 0), EmotionLabel::Angry),
        30,
        2024,
    )
    .unwrap();
    let dataset = extract_dataset(&walks, JointSet::Significant14);
    let report = cross_validate(&dataset, &ClassifierSpec::Gnb, 10, 7).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(report.accuracy >= 90.0, "accuracy {:.2}%", report.accuracy);
    assert!(elapsed < 60.0, "{elapsed:.2} s");
    println!(
        "[PASS] criterion 6: GNB 10-fold accuracy {:.2}% >= 90% on 1.6 vs 2.4 Hz corpus, {elapsed:.1} s",
        report.accuracy
    );
}

#[test]
fn criterion_07_chance_level_control() {
    let start = Instant::now();
    let mut accuracies = Vec::with_capacity(50);
    for seed in 0..50u64 {
        let walks = generate_walks(
            (&gait_params(1.8, 0.02, 0), EmotionLabel::Natural),
            (&gait_params(1.8, 0.02, 0), EmotionLabel::Angry),
            100,
            1000 + seed,
        )
        .unwrap();
        let dataset = extract_dataset(&walks, JointSet::Significant14);
        let report = cross_validate(&dataset, &ClassifierSpec::Gnb, 10, seed).unwrap();
        accuracies.push(report.accuracy);
    }
    let mean = accuracies.iter().sum::<f64>() / accuracies.len() as f64;
    let max = accuracies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let elapsed = start.elapsed().as_secs_f64();
    assert!((45.0..=55.0).contains(&mean), "mean accuracy {mean:.2}%");
    assert!(max <= 65.0, "max accuracy {max:.2}%");
    assert!(elapsed < 300.0, "{elapsed:.1} s");
    println!(
        "[PASS] criterion 7: identical-class corpora score mean {mean:.2}% (max {max:.2}%) over 50 seeds, {elapsed:.1} s"
    );
}

#[test]
fn criterion_08_smo_correctness() {
    // Margin-2 separable blob pair in 2-D.
    let mut rows = Vec::new();
    let mut rng = SplitMix(0x5EED);
    for i in 0..10 {
        rows.push(LabeledRow {
            walk_id: format!("n{i}"),
            label: EmotionLabel::Natural,
            features: vec![-1.0 - rng.next_f64().abs(), rng.next_f64()],
        });
        rows.push(LabeledRow {
            walk_id: format!("a{i}"),
            label: EmotionLabel::Angry,
            features: vec![1.0 + rng.next_f64().abs(), rng.next_f64()],
        });
    }
    let d = LabeledDataset::new(rows).unwrap();
    let m = train_svm_smo(&d, &SvmParams::default()).unwrap();

    assert!(m.alpha_bounds_ok, "alpha out of [0, C]");
    assert!(
        m.dual_constraint_residual <= 1e-8,
        "sum(alpha*y) = {}",
        m.dual_constraint_residual
    );
    for r in d.rows() {
        assert_eq!(m.predict(&r.features).unwrap().0, r.label);
    }

    let inverted = LabeledDataset::new(
        d.rows()
            .iter()
            .map(|r| LabeledRow {
                walk_id: r.walk_id.clone(),
                label: if r.label == EmotionLabel::Natural {
                    EmotionLabel::Angry
                } else {
                    EmotionLabel::Natural
                },
                features: r.features.clone(),
            })
            .collect(),
    )
    .unwrap();
    let mi = train_svm_smo(&inverted, &SvmParams::default()).unwrap();
    for (a, b) in m.weights.iter().zip(&mi.weights) {
        assert!((a + b).abs() < 1e-6, "weights not negated: {a} vs {b}");
    }
    println!("[PASS] criterion 8: SMO dual feasibility, 100% training accuracy, weight negation under label inversion");
}

#[test]
fn criterion_09_ablation_direction() {
    let noisy_extremities = |stride: f64| -> GaitParams {
        let mut p = gait_params(stride, 0.005, 0);
        p.extremity_noise_std = 0.4;
        p
    };
    let walks = generate_walks(
        (&noisy_extremities(1.6), EmotionLabel::Natural),
        (&noisy_extremities(2.4), EmotionLabel::Angry),
        20,
        77,
    )
    .unwrap();
    let acc14 = cross_validate(
        &extract_dataset(&walks, JointSet::Significant14),
        &ClassifierSpec::Gnb,
        10,
        7,
    )
    .unwrap()
    .accuracy;
    let acc25 = cross_validate(
        &extract_dataset(&walks, JointSet::All25),
        &ClassifierSpec::Gnb,
        10,
        7,
    )
    .unwrap()
    .accuracy;
    assert!(
        acc14 >= acc25,
        "14-joint {acc14:.2}% < 25-joint {acc25:.2}%"
    );

    // Without extremity noise both modes separate the corpus.
    let clean = generate_walks(
        (&gait_params(1.6, 0.002, 0), EmotionLabel::Natural),
        (&gait_params(2.4, 0.002, 0), EmotionLabel::Angry),
        20,
        78,
    )
    .unwrap();
    for joint_set in [JointSet::Significant14, JointSet::All25] {
        let acc = cross_validate(
            &extract_dataset(&clean, joint_set),
            &ClassifierSpec::Gnb,
            10,
            7,
        )
        .unwrap()
        .accuracy;
        assert!(acc >= 90.0, "{joint_set:?}: {acc:.2}%");
    }
    println!("[PASS] criterion 9: 14-joint accuracy {acc14:.2}% >= 25-joint {acc25:.2}% on noisy-extremity corpus");
}

#[test]
fn criterion_10_determinism_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();

    // Walk file round-trip is exact.
    let walk = generate_walk(
        &gait_params(1.9, 0.01, 21),
        EmotionLabel::Happy,
        "w9",
        "s9",
        "k2",
    )
    .unwrap();
    let walk_path = dir.path().join("w9.csv");
    ingest::write_frames_csv(&walk_path, &walk).unwrap();
    assert_eq!(ingest::parse_frames_csv(&walk_path).unwrap(), walk);

    // Features CSV round-trip within 1e-12 per value.
    let (front, back) = preprocess_walk(&walk, &PipelineConfig::default()).unwrap();
    let fv = walk_features(
        &front,
        &back,
        walk.sample_rate,
        MissingSidePolicy::Reject,
        PhaseMean::Arithmetic,
    )
    .unwrap();
    let feat_path = dir.path().join("features.csv");
    let rows = vec![("w9".to_string(), EmotionLabel::Happy, fv)];
    ingest::write_features_csv(&feat_path, &rows).unwrap();
    let read_back = ingest::read_features_csv(&feat_path).unwrap();
    for (a, b) in rows[0].2.values.iter().zip(&read_back[0].2.values) {
        assert!((a - b).abs() <= 1e-12);
    }

    // Model round-trip gives identical predictions.
    let walks = generate_walks(
        (&gait_params(1.6, 0.01, 0), EmotionLabel::Natural),
        (&gait_params(2.4, 0.01, 0), EmotionLabel::Angry),
        5,
        3,
    )
    .unwrap();
    let dataset = extract_dataset(&walks, JointSet::Significant14);
    for model in [
        emogait::classify::ClassifierModel::Gnb(emogait::classify::train_gnb(&dataset).unwrap()),
        emogait::classify::ClassifierModel::Svm(
            train_svm_smo(&dataset, &SvmParams::default()).unwrap(),
        ),
    ] {
        let model_path = dir.path().join("model.txt");
        ingest::save_model(&model_path, &model).unwrap();
        let loaded = ingest::load_model(&model_path).unwrap();
        for row in dataset.rows() {
            assert_eq!(
                model.predict(&row.features).unwrap(),
                loaded.predict(&row.features).unwrap()
            );
        }
    }

    // Seeded generation is bit-reproducible.
    let again = generate_walk(
        &gait_params(1.9, 0.01, 21),
        EmotionLabel::Happy,
        "w9",
        "s9",
        "k2",
    )
    .unwrap();
    assert_eq!(again, walk);

    println!("[PASS] criterion 10: seeded determinism and walk/features/model round-trips");
}
