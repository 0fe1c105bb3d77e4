//! Bit-exact text formats: frame CSV, dataset manifests, feature tables
//! and trained-model files.
//!
//! All parsers reject rather than coerce: no column reordering, no NaN
//! tolerance. Files are UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;

use crate::classify::{ClassifierModel, GaussianNbModel, LinearSvmModel};
use crate::features::FeatureVector;
use crate::skeleton::{EmotionLabel, Frame, JointId, Walk};

pub const FRAME_CSV_COLUMNS: usize = 2 + 75;
pub const MODEL_FORMAT_VERSION: &str = "v1";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: expected {expected} fields, got {got}")]
    BadFieldCount {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}, column {col}: non-finite or unparseable value")]
    NonFiniteValue { line: usize, col: usize },
    #[error("line {line}: frame_index not strictly increasing")]
    NonMonotonicIndex { line: usize },
    #[error("duplicate walk_id {0:?}")]
    DuplicateWalkId(String),
    #[error("line {line}: unknown label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("feature width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("unknown model kind {0:?}")]
    UnknownModelKind(String),
    #[error("model format version mismatch: expected {expected}, got {got}")]
    VersionMismatch { expected: String, got: String },
    #[error("corrupt model payload: {0}")]
    CorruptPayload(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn frame_header() -> String {
    let mut h = String::from("frame_index,timestamp");
    for joint in JointId::ALL {
        for axis in ["x", "y", "z"] {
            let _ = write!(h, ",{}_{axis}", joint.name());
        }
    }
    h
}

/// Writes a walk as frame CSV: `#key=value` directives carrying the walk
/// metadata, the fixed 77-column header, then one frame per line.
pub fn write_frames_csv(path: &Path, w: &Walk) -> Result<(), IngestError> {
    let mut out = String::new();
    let _ = writeln!(out, "#walk_id={}", w.walk_id);
    let _ = writeln!(out, "#subject_id={}", w.subject_id);
    let _ = writeln!(out, "#camera_id={}", w.camera_id);
    let _ = writeln!(out, "#label={}", w.label);
    let _ = writeln!(out, "#sample_rate={}", w.sample_rate);
    out.push_str(&frame_header());
    out.push('\n');
    for f in &w.frames {
        let _ = write!(out, "{},{}", f.frame_index, f.timestamp);
        for p in &f.positions {
            for c in p {
                let _ = write!(out, ",{c}");
            }
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Parses frame CSV into a walk. Metadata directives are optional:
/// without them the walk id falls back to the file stem, the label to
/// natural and the sample rate to 30 Hz.
pub fn parse_frames_csv(path: &Path) -> Result<Walk, IngestError> {
    let content = fs::read_to_string(path)?;
    let mut walk_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "walk".to_string());
    let mut subject_id = String::new();
    let mut camera_id = String::new();
    let mut label = EmotionLabel::Natural;
    let mut sample_rate = 30.0;

    let mut lines = content.lines().enumerate().peekable();
    while let Some((line_no, line)) = lines.peek().copied() {
        let Some(directive) = line.strip_prefix('#') else {
            break;
        };
        lines.next();
        let (key, value) = directive.split_once('=').ok_or_else(|| {
            IngestError::MalformedHeader(format!("bad directive on line {}", line_no + 1))
        })?;
        match key {
            "walk_id" => walk_id = value.to_string(),
            "subject_id" => subject_id = value.to_string(),
            "camera_id" => camera_id = value.to_string(),
            "label" => {
                label = value.parse().map_err(|_| IngestError::UnknownLabel {
                    line: line_no + 1,
                    label: value.to_string(),
                })?
            }
            "sample_rate" => {
                sample_rate = value.parse().map_err(|_| {
                    IngestError::MalformedHeader(format!("bad sample_rate {value:?}"))
                })?
            }
            other => {
                return Err(IngestError::MalformedHeader(format!(
                    "unknown directive {other:?}"
                )))
            }
        }
    }

    let (header_line_no, header) = lines
        .next()
        .ok_or_else(|| IngestError::MalformedHeader("empty file".into()))?;
    if header != frame_header() {
        return Err(IngestError::MalformedHeader(format!(
            "line {}: header does not match the canonical 77-column layout",
            header_line_no + 1
        )));
    }

    let mut frames = Vec::new();
    for (line_no, line) in lines {
        let line_no = line_no + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != FRAME_CSV_COLUMNS {
            return Err(IngestError::BadFieldCount {
                line: line_no,
                expected: FRAME_CSV_COLUMNS,
                got: fields.len(),
            });
        }
        let frame_index: u64 = fields[0].parse().map_err(|_| IngestError::NonFiniteValue {
            line: line_no,
            col: 1,
        })?;
        if let Some(prev) = frames.last().map(|f: &Frame| f.frame_index) {
            if frame_index <= prev {
                return Err(IngestError::NonMonotonicIndex { line: line_no });
            }
        }
        let mut values = Vec::with_capacity(FRAME_CSV_COLUMNS - 1);
        for (col, field) in fields.iter().enumerate().skip(1) {
            let v: f64 = field.parse().map_err(|_| IngestError::NonFiniteValue {
                line: line_no,
                col: col + 1,
            })?;
            if !v.is_finite() {
                return Err(IngestError::NonFiniteValue {
                    line: line_no,
                    col: col + 1,
                });
            }
            values.push(v);
        }
        let timestamp = values[0];
        let positions = values[1..]
            .chunks_exact(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        frames.push(Frame {
            frame_index,
            timestamp,
            positions,
        });
    }

    Ok(Walk {
        walk_id,
        subject_id,
        camera_id,
        label,
        sample_rate,
        frames,
    })
}

/// One dataset entry; `file_path` is interpreted relative to the manifest
/// location when not absolute.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub walk_id: String,
    pub file_path: String,
    pub subject_id: String,
    pub camera_id: String,
    pub label: EmotionLabel,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

const MANIFEST_HEADER: &str = "walk_id,file_path,subject_id,camera_id,label";

pub fn write_manifest(path: &Path, m: &Manifest) -> Result<(), IngestError> {
    let mut out = String::from(MANIFEST_HEADER);
    out.push('\n');
    for e in &m.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.walk_id, e.file_path, e.subject_id, e.camera_id, e.label
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// Loads a manifest; entry file paths are checked lazily, at use time.
pub fn load_manifest(path: &Path) -> Result<Manifest, IngestError> {
    let content = fs::read_to_string(path)?;
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == MANIFEST_HEADER => {}
        other => {
            return Err(IngestError::MalformedHeader(format!(
                "manifest header must be {MANIFEST_HEADER:?}, got {:?}",
                other.map(|(_, h)| h).unwrap_or("")
            )))
        }
    }
    let mut entries: Vec<ManifestEntry> = Vec::new();
    for (line_no, line) in lines {
        let line_no = line_no + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(IngestError::BadFieldCount {
                line: line_no,
                expected: 5,
                got: fields.len(),
            });
        }
        let label: EmotionLabel = fields[4].parse().map_err(|_| IngestError::UnknownLabel {
            line: line_no,
            label: fields[4].to_string(),
        })?;
        if entries.iter().any(|e| e.walk_id == fields[0]) {
            return Err(IngestError::DuplicateWalkId(fields[0].to_string()));
        }
        entries.push(ManifestEntry {
            walk_id: fields[0].to_string(),
            file_path: fields[1].to_string(),
            subject_id: fields[2].to_string(),
            camera_id: fields[3].to_string(),
            label,
        });
    }
    Ok(Manifest { entries })
}

/// Parses the frame file behind one manifest entry and stamps the entry's
/// metadata onto the resulting walk.
pub fn load_walk(manifest_path: &Path, entry: &ManifestEntry) -> Result<Walk, IngestError> {
    let file = Path::new(&entry.file_path);
    let resolved = if file.is_absolute() {
        file.to_path_buf()
    } else {
        manifest_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(file)
    };
    let mut walk = parse_frames_csv(&resolved)?;
    walk.walk_id = entry.walk_id.clone();
    walk.subject_id = entry.subject_id.clone();
    walk.camera_id = entry.camera_id.clone();
    walk.label = entry.label;
    Ok(walk)
}

/// Writes a feature table: header `walk_id,label,f_1..f_N`, one row per
/// walk, values printed to 17 significant digits.
pub fn write_features_csv(
    path: &Path,
    rows: &[(String, EmotionLabel, FeatureVector)],
) -> Result<(), IngestError> {
    let width = rows.first().map_or(0, |(_, _, v)| v.values.len());
    for (_, _, v) in rows {
        if v.values.len() != width {
            return Err(IngestError::WidthMismatch {
                expected: width,
                got: v.values.len(),
            });
        }
    }
    let mut out = String::from("walk_id,label");
    for i in 1..=width {
        let _ = write!(out, ",f_{i}");
    }
    out.push('\n');
    for (walk_id, label, v) in rows {
        let _ = write!(out, "{walk_id},{label}");
        for value in &v.values {
            let _ = write!(out, ",{value:.16e}");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_features_csv(
    path: &Path,
) -> Result<Vec<(String, EmotionLabel, FeatureVector)>, IngestError> {
    let content = fs::read_to_string(path)?;
    let mut lines = content.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| IngestError::MalformedHeader("empty features file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 2 || cols[0] != "walk_id" || cols[1] != "label" {
        return Err(IngestError::MalformedHeader(format!(
            "bad features header {header:?}"
        )));
    }
    for (i, c) in cols.iter().enumerate().skip(2) {
        if *c != format!("f_{}", i - 1) {
            return Err(IngestError::MalformedHeader(format!(
                "bad feature column {c:?}"
            )));
        }
    }
    let width = cols.len() - 2;
    let mut rows = Vec::new();
    for (line_no, line) in lines {
        let line_no = line_no + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(IngestError::BadFieldCount {
                line: line_no,
                expected: cols.len(),
                got: fields.len(),
            });
        }
        let label: EmotionLabel = fields[1].parse().map_err(|_| IngestError::UnknownLabel {
            line: line_no,
            label: fields[1].to_string(),
        })?;
        let mut values = Vec::with_capacity(width);
        for f in &fields[2..] {
            let v: f64 = f.parse().map_err(|_| IngestError::MalformedRow {
                line: line_no,
                reason: format!("unparseable feature value {f:?}"),
            })?;
            if !v.is_finite() {
                return Err(IngestError::MalformedRow {
                    line: line_no,
                    reason: "non-finite feature value".into(),
                });
            }
            values.push(v);
        }
        rows.push((
            fields[0].to_string(),
            label,
            FeatureVector {
                values,
                zero_filled_front: false,
                zero_filled_back: false,
            },
        ));
    }
    Ok(rows)
}

fn write_vec(out: &mut String, key: &str, values: &[f64]) {
    let _ = write!(out, "{key}");
    for v in values {
        let _ = write!(out, " {v:.16e}");
    }
    out.push('\n');
}

/// Saves a trained model as a self-describing keyed text file with a
/// version field, a kind tag and a terminating `end` sentinel.
pub fn save_model(path: &Path, m: &ClassifierModel) -> Result<(), IngestError> {
    let mut out = format!("emogait-model {MODEL_FORMAT_VERSION}\n");
    match m {
        ClassifierModel::Gnb(g) => {
            out.push_str("kind gnb\n");
            let _ = writeln!(out, "width {}", g.width);
            let classes: Vec<&str> = g.classes.iter().map(|c| c.as_str()).collect();
            let _ = writeln!(out, "classes {}", classes.join(","));
            write_vec(&mut out, "priors", &g.priors);
            for (i, c) in g.classes.iter().enumerate() {
                write_vec(&mut out, &format!("mean_{c}"), &g.means[i]);
                write_vec(&mut out, &format!("var_{c}"), &g.variances[i]);
            }
        }
        ClassifierModel::Svm(s) => {
            out.push_str("kind svm\n");
            let _ = writeln!(out, "negative {}", s.negative);
            let _ = writeln!(out, "positive {}", s.positive);
            let _ = writeln!(out, "c {:.16e}", s.c);
            let _ = writeln!(out, "bias {:.16e}", s.bias);
            write_vec(&mut out, "weights", &s.weights);
            write_vec(&mut out, "feature_means", &s.feature_means);
            write_vec(&mut out, "feature_stds", &s.feature_stds);
            let _ = writeln!(out, "iterations {}", s.iterations);
            let _ = writeln!(
                out,
                "kkt_violations_remaining {}",
                s.kkt_violations_remaining
            );
            let _ = writeln!(out, "alpha_bounds_ok {}", s.alpha_bounds_ok);
            let _ = writeln!(
                out,
                "dual_constraint_residual {:.16e}",
                s.dual_constraint_residual
            );
            let _ = writeln!(out, "converged {}", s.converged);
            let _ = writeln!(out, "degenerate {}", s.degenerate);
        }
    }
    out.push_str("end\n");
    fs::write(path, out)?;
    Ok(())
}

struct KeyedReader<'a> {
    lines: std::str::Lines<'a>,
}

impl<'a> KeyedReader<'a> {
    fn next_kv(&mut self, expected_key: &str) -> Result<&'a str, IngestError> {
        let line = self
            .lines
            .next()
            .ok_or_else(|| IngestError::CorruptPayload(format!("missing {expected_key:?} line")))?;
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| IngestError::CorruptPayload(format!("bad line {line:?}")))?;
        if key != expected_key {
            return Err(IngestError::CorruptPayload(format!(
                "expected key {expected_key:?}, got {key:?}"
            )));
        }
        Ok(value)
    }

    fn vec(&mut self, key: &str) -> Result<Vec<f64>, IngestError> {
        self.next_kv(key)?
            .split(' ')
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| IngestError::CorruptPayload(format!("bad number in {key:?}")))
            })
            .collect()
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, IngestError> {
        self.next_kv(key)?
            .parse()
            .map_err(|_| IngestError::CorruptPayload(format!("bad value for {key:?}")))
    }

    fn expect_end(&mut self) -> Result<(), IngestError> {
        match self.lines.next() {
            Some("end") => Ok(()),
            _ => Err(IngestError::CorruptPayload(
                "missing end sentinel (truncated file?)".into(),
            )),
        }
    }
}

pub fn load_model(path: &Path) -> Result<ClassifierModel, IngestError> {
    let content = fs::read_to_string(path)?;
    let mut r = KeyedReader {
        lines: content.lines(),
    };
    let magic = r
        .lines
        .next()
        .ok_or_else(|| IngestError::CorruptPayload("empty model file".into()))?;
    match magic.split_once(' ') {
        Some(("emogait-model", version)) if version == MODEL_FORMAT_VERSION => {}
        Some(("emogait-model", version)) => {
            return Err(IngestError::VersionMismatch {
                expected: MODEL_FORMAT_VERSION.to_string(),
                got: version.to_string(),
            })
        }
        _ => {
            return Err(IngestError::CorruptPayload(format!(
                "bad magic line {magic:?}"
            )))
        }
    }
    let kind = r.next_kv("kind")?;
    match kind {
        "gnb" => {
            let width: usize = r.parse("width")?;
            let classes: Vec<EmotionLabel> = r
                .next_kv("classes")?
                .split(',')
                .map(|s| {
                    s.parse()
                        .map_err(|_| IngestError::CorruptPayload(format!("bad class {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            let priors = r.vec("priors")?;
            let mut means = Vec::with_capacity(classes.len());
            let mut variances = Vec::with_capacity(classes.len());
            for c in &classes {
                means.push(r.vec(&format!("mean_{c}"))?);
                variances.push(r.vec(&format!("var_{c}"))?);
            }
            r.expect_end()?;
            if priors.len() != classes.len() || means.iter().any(|m| m.len() != width) {
                return Err(IngestError::CorruptPayload(
                    "inconsistent gnb dimensions".into(),
                ));
            }
            Ok(ClassifierModel::Gnb(GaussianNbModel {
                classes,
                priors,
                means,
                variances,
                width,
            }))
        }
        "svm" => {
            let negative: EmotionLabel = r.parse("negative")?;
            let positive: EmotionLabel = r.parse("positive")?;
            let c: f64 = r.parse("c")?;
            let bias: f64 = r.parse("bias")?;
            let weights = r.vec("weights")?;
            let feature_means = r.vec("feature_means")?;
            let feature_stds = r.vec("feature_stds")?;
            let iterations: usize = r.parse("iterations")?;
            let kkt_violations_remaining: usize = r.parse("kkt_violations_remaining")?;
            let alpha_bounds_ok: bool = r.parse("alpha_bounds_ok")?;
            let dual_constraint_residual: f64 = r.parse("dual_constraint_residual")?;
            let converged: bool = r.parse("converged")?;
            let degenerate: bool = r.parse("degenerate")?;
            r.expect_end()?;
            if feature_means.len() != weights.len() || feature_stds.len() != weights.len() {
                return Err(IngestError::CorruptPayload(
                    "inconsistent svm dimensions".into(),
                ));
            }
            Ok(ClassifierModel::Svm(LinearSvmModel {
                negative,
                positive,
                weights,
                bias,
                c,
                feature_means,
                feature_stds,
                iterations,
                kkt_violations_remaining,
                alpha_bounds_ok,
                dual_constraint_residual,
                converged,
                degenerate,
            }))
        }
        other => Err(IngestError::UnknownModelKind(other.to_string())),
    }
}
