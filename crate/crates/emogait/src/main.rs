//! Command-line frontend: synthetic corpus generation, feature
//! extraction, cross-validated evaluation and the joint-subset ablation.
//!
//! Exit codes: 0 success, 1 environment/I-O failure, 2 invalid input or
//! degenerate data.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use emogait::classify::{
    cross_validate, ClassifierSpec, ClassifyError, LabeledDataset, LabeledRow, SvmParams,
};
use emogait::features::{walk_features, FeatureVector, MissingSidePolicy, PhaseMean};
use emogait::ingest::{self, IngestError, Manifest};
use emogait::preprocess::{preprocess_walk, PipelineConfig};
use emogait::skeleton::{EmotionLabel, JointSet};
use emogait::synth::{generate_corpus, GaitParams, SynthError};

#[derive(Parser)]
#[command(
    name = "emogait",
    version,
    about = "Gait-based emotion recognition pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Gnb,
    Svm,
}

#[derive(Clone, Copy, ValueEnum)]
enum JointsArg {
    #[value(name = "14")]
    Fourteen,
    #[value(name = "25")]
    TwentyFive,
}

impl JointsArg {
    fn joint_set(self) -> JointSet {
        match self {
            JointsArg::Fourteen => JointSet::Significant14,
            JointsArg::TwentyFive => JointSet::All25,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MissingSideArg {
    Reject,
    Zerofill,
}

impl MissingSideArg {
    fn policy(self) -> MissingSidePolicy {
        match self {
            MissingSideArg::Reject => MissingSidePolicy::Reject,
            MissingSideArg::Zerofill => MissingSidePolicy::ZeroFill,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic two-class walking corpus from a TOML params file.
    Synth {
        /// TOML file with class parameters, n_per_class and seed.
        #[arg(long)]
        params: PathBuf,
        /// Output directory for frame CSVs and the manifest.
        #[arg(long)]
        out: PathBuf,
        /// Write into a non-empty output directory.
        #[arg(long)]
        force: bool,
    },
    /// Extract walk feature vectors for every manifest entry.
    Extract {
        #[arg(long)]
        manifest: PathBuf,
        /// Output features CSV path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "14")]
        joints: JointsArg,
        #[arg(long, value_enum, default_value = "reject")]
        missing_side: MissingSideArg,
    },
    /// Cross-validate a classifier on an extracted feature table.
    Crossval {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_enum, default_value = "gnb")]
        classifier: ClassifierArg,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional keyed report output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline in 14-joint and 25-joint modes and compare.
    Ablate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "gnb")]
        classifier: ClassifierArg,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "reject")]
        missing_side: MissingSideArg,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn io(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> CliError {
        match e {
            IngestError::Io(_) => CliError::io(e.to_string()),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> CliError {
        CliError::invalid(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> CliError {
        match e {
            SynthError::Ingest(inner) => inner.into(),
            SynthError::InvalidParams(_) => CliError::invalid(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Synth { params, out, force } => cmd_synth(&params, &out, force),
        Command::Extract {
            manifest,
            out,
            joints,
            missing_side,
        } => cmd_extract(&manifest, &out, joints.joint_set(), missing_side.policy()),
        Command::Crossval {
            features,
            classifier,
            folds,
            seed,
            out,
        } => cmd_crossval(&features, classifier, folds, seed, out.as_deref()),
        Command::Ablate {
            manifest,
            classifier,
            folds,
            seed,
            missing_side,
        } => cmd_ablate(&manifest, classifier, folds, seed, missing_side.policy()),
    }
}

/// TOML schema of the synth params file.
#[derive(Deserialize)]
struct SynthSpec {
    n_per_class: usize,
    #[serde(default)]
    seed: u64,
    class_a: ClassSpec,
    class_b: ClassSpec,
}

#[derive(Deserialize)]
struct ClassSpec {
    label: String,
    #[serde(flatten)]
    params: GaitParams,
}

fn parse_label(s: &str) -> Result<EmotionLabel, CliError> {
    s.parse().map_err(|e: String| CliError::invalid(e))
}

fn cmd_synth(params_path: &Path, out_dir: &Path, force: bool) -> Result<(), CliError> {
    let text = std::fs::read_to_string(params_path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", params_path.display())))?;
    let spec: SynthSpec =
        toml::from_str(&text).map_err(|e| CliError::invalid(format!("bad params file: {e}")))?;
    let label_a = parse_label(&spec.class_a.label)?;
    let label_b = parse_label(&spec.class_b.label)?;
    if out_dir.exists() && !force {
        let non_empty = std::fs::read_dir(out_dir)
            .map_err(|e| CliError::io(e.to_string()))?
            .next()
            .is_some();
        if non_empty {
            return Err(CliError::invalid(format!(
                "output directory {} is not empty; pass --force to write anyway",
                out_dir.display()
            )));
        }
    }
    let manifest = generate_corpus(
        (&spec.class_a.params, label_a),
        (&spec.class_b.params, label_b),
        spec.n_per_class,
        spec.seed,
        out_dir,
    )?;
    println!(
        "wrote {} walks ({} per class) and manifest.csv to {}",
        manifest.entries.len(),
        spec.n_per_class,
        out_dir.display()
    );
    Ok(())
}

type FeatureRows = Vec<(String, EmotionLabel, FeatureVector)>;

/// Runs the pipeline over every manifest entry; per-walk failures become
/// skip records instead of aborting the corpus run.
fn extract_rows(
    manifest_path: &Path,
    manifest: &Manifest,
    joint_set: JointSet,
    policy: MissingSidePolicy,
) -> (FeatureRows, Vec<(String, String)>) {
    let cfg = PipelineConfig {
        joint_set,
        ..PipelineConfig::default()
    };
    let mut rows = Vec::new();
    let mut skips = Vec::new();
    for entry in &manifest.entries {
        let result = ingest::load_walk(manifest_path, entry)
            .map_err(|e| e.to_string())
            .and_then(|walk| {
                let (front, back) = preprocess_walk(&walk, &cfg).map_err(|e| e.to_string())?;
                walk_features(
                    &front,
                    &back,
                    walk.sample_rate,
                    policy,
                    PhaseMean::Arithmetic,
                )
                .map_err(|e| e.to_string())
            });
        match result {
            Ok(features) => rows.push((entry.walk_id.clone(), entry.label, features)),
            Err(reason) => skips.push((entry.walk_id.clone(), reason)),
        }
    }
    (rows, skips)
}

fn cmd_extract(
    manifest_path: &Path,
    out: &Path,
    joint_set: JointSet,
    policy: MissingSidePolicy,
) -> Result<(), CliError> {
    let manifest = ingest::load_manifest(manifest_path)?;
    let (rows, skips) = extract_rows(manifest_path, &manifest, joint_set, policy);
    ingest::write_features_csv(out, &rows)?;

    let mut report = String::new();
    for (walk_id, reason) in &skips {
        report.push_str(&format!("skip {walk_id}: {reason}\n"));
    }
    let report_path = out.with_extension("skips.txt");
    std::fs::write(&report_path, &report).map_err(|e| CliError::io(e.to_string()))?;
    print!("{report}");
    println!(
        "extracted {}/{} walks -> {}",
        rows.len(),
        manifest.entries.len(),
        out.display()
    );
    if rows.is_empty() {
        return Err(CliError::invalid(
            "no walk produced a feature row".to_string(),
        ));
    }
    Ok(())
}

fn dataset_from_features(path: &Path) -> Result<LabeledDataset, CliError> {
    let rows = ingest::read_features_csv(path)?;
    let labeled: Vec<LabeledRow> = rows
        .into_iter()
        .map(|(walk_id, label, v)| LabeledRow {
            walk_id,
            label,
            features: v.values,
        })
        .collect();
    Ok(LabeledDataset::new(labeled)?)
}

fn classifier_spec(arg: ClassifierArg, seed: u64) -> ClassifierSpec {
    match arg {
        ClassifierArg::Gnb => ClassifierSpec::Gnb,
        ClassifierArg::Svm => ClassifierSpec::Svm(SvmParams {
            seed,
            ..SvmParams::default()
        }),
    }
}

fn cmd_crossval(
    features: &Path,
    classifier: ClassifierArg,
    folds: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let dataset = dataset_from_features(features)?;
    let spec = classifier_spec(classifier, seed);
    let report = cross_validate(&dataset, &spec, folds, seed)?;
    print!("{}", report.to_table());
    if let Some(out) = out {
        std::fs::write(out, report.to_keyed()).map_err(|e| CliError::io(e.to_string()))?;
    }
    Ok(())
}

fn cmd_ablate(
    manifest_path: &Path,
    classifier: ClassifierArg,
    folds: usize,
    seed: u64,
    policy: MissingSidePolicy,
) -> Result<(), CliError> {
    let manifest = ingest::load_manifest(manifest_path)?;
    if manifest.entries.is_empty() {
        return Err(CliError::invalid("manifest has no entries".to_string()));
    }
    let mut accuracies = Vec::new();
    for joint_set in [JointSet::Significant14, JointSet::All25] {
        let (rows, _) = extract_rows(manifest_path, &manifest, joint_set, policy);
        let labeled: Vec<LabeledRow> = rows
            .into_iter()
            .map(|(walk_id, label, v)| LabeledRow {
                walk_id,
                label,
                features: v.values,
            })
            .collect();
        let dataset = LabeledDataset::new(labeled)?;
        let spec = classifier_spec(classifier, seed);
        let report = cross_validate(&dataset, &spec, folds, seed)?;
        accuracies.push(report.accuracy);
    }
    println!("Joints       14        25");
    println!("Accuracy(%)  {:<9.4} {:<9.4}", accuracies[0], accuracies[1]);
    Ok(())
}
