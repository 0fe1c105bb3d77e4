//! Classifiers and evaluation: Gaussian naive Bayes, an SMO-trained
//! linear SVM, stratified k-fold cross-validation and accuracy reports.
//!
//! ```
//! use emogait::classify::{train_gnb, LabeledDataset, LabeledRow};
//! use emogait::skeleton::EmotionLabel;
//!
//! let rows = vec![
//!     LabeledRow { walk_id: "a0".into(), label: EmotionLabel::Angry, features: vec![2.4, 0.1] },
//!     LabeledRow { walk_id: "a1".into(), label: EmotionLabel::Angry, features: vec![2.5, 0.2] },
//!     LabeledRow { walk_id: "n0".into(), label: EmotionLabel::Natural, features: vec![1.6, 0.1] },
//!     LabeledRow { walk_id: "n1".into(), label: EmotionLabel::Natural, features: vec![1.5, 0.2] },
//! ];
//! let dataset = LabeledDataset::new(rows)?;
//! let model = train_gnb(&dataset)?;
//!
//! let (label, _log_posteriors) = model.predict(&[2.45, 0.15])?;
//! assert_eq!(label, EmotionLabel::Angry);
//! # Ok::<(), emogait::classify::ClassifyError>(())
//! ```

mod eval;
mod gnb;
mod svm;

pub use eval::{cross_validate, stratified_kfold, ClassifierSpec, EvalReport};
pub use gnb::{train_gnb, GaussianNbModel, VARIANCE_FLOOR};
pub use svm::{train_svm_smo, LinearSvmModel, SvmParams};

use thiserror::Error;

use crate::skeleton::EmotionLabel;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("feature width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("dataset row {row} has non-finite feature value")]
    NonFinite { row: usize },
    #[error("class {0} has fewer than 2 rows")]
    DegenerateClass(EmotionLabel),
    #[error("training requires at least 2 distinct classes")]
    SingleClass,
    #[error("SVM training requires exactly 2 classes, got {0}")]
    NotBinary(usize),
    #[error("class {label} has {count} rows, fewer than k = {k}")]
    TooFewPerClass {
        label: EmotionLabel,
        count: usize,
        k: usize,
    },
    #[error("k must be at least 2, got {0}")]
    BadFoldCount(usize),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

/// One labeled feature row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub walk_id: String,
    pub label: EmotionLabel,
    pub features: Vec<f64>,
}

/// Feature rows with a shared width, the unit all training and evaluation
/// operations consume.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    rows: Vec<LabeledRow>,
    width: usize,
}

impl LabeledDataset {
    pub fn new(rows: Vec<LabeledRow>) -> Result<LabeledDataset, ClassifyError> {
        let width = rows.first().map_or(0, |r| r.features.len());
        for (i, row) in rows.iter().enumerate() {
            if row.features.len() != width {
                return Err(ClassifyError::WidthMismatch {
                    expected: width,
                    got: row.features.len(),
                });
            }
            if row.features.iter().any(|v| !v.is_finite()) {
                return Err(ClassifyError::NonFinite { row: i });
            }
        }
        Ok(LabeledDataset { rows, width })
    }

    pub fn rows(&self) -> &[LabeledRow] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct labels in canonical enum order.
    pub fn classes(&self) -> Vec<EmotionLabel> {
        let mut present: Vec<EmotionLabel> = EmotionLabel::ALL
            .iter()
            .copied()
            .filter(|l| self.rows.iter().any(|r| r.label == *l))
            .collect();
        present.dedup();
        present
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            width: self.width,
        }
    }
}

/// A trained classifier of either kind, the unit model files round-trip.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierModel {
    Gnb(GaussianNbModel),
    Svm(LinearSvmModel),
}

impl ClassifierModel {
    pub fn predict(&self, x: &[f64]) -> Result<EmotionLabel, ClassifyError> {
        match self {
            ClassifierModel::Gnb(m) => m.predict(x).map(|(l, _)| l),
            ClassifierModel::Svm(m) => m.predict(x).map(|(l, _)| l),
        }
    }
}
