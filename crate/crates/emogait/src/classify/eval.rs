//! Stratified k-fold cross-validation and accuracy reporting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{train_gnb, train_svm_smo, ClassifyError, LabeledDataset, SvmParams};
use crate::skeleton::EmotionLabel;

/// Which classifier cross-validation trains per fold.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    Gnb,
    Svm(SvmParams),
}

impl ClassifierSpec {
    pub fn id(&self) -> &'static str {
        match self {
            ClassifierSpec::Gnb => "NaiveBayes",
            ClassifierSpec::Svm(_) => "SMO",
        }
    }
}

/// Cross-validation outcome: overall accuracy, confusion counts and the
/// per-fold accuracies, with enough provenance to reproduce the run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub classifier: String,
    pub seed: u64,
    pub k: usize,
    /// Row/column order of the confusion matrix.
    pub classes: Vec<EmotionLabel>,
    /// `confusion[actual][predicted]` counts.
    pub confusion: Vec<Vec<usize>>,
    pub fold_accuracies: Vec<f64>,
    /// Percentage of correct predictions over the whole dataset.
    pub accuracy: f64,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.confusion.iter().map(|r| r.iter().sum::<usize>()).sum()
    }

    pub fn correct(&self) -> usize {
        (0..self.classes.len()).map(|i| self.confusion[i][i]).sum()
    }

    /// Accuracy table in the layout of the published results tables.
    pub fn to_table(&self) -> String {
        format!(
            "Classifier   {}\nAccuracy(%)  {:.4}\n",
            self.classifier, self.accuracy
        )
    }

    /// Machine-readable keyed rendering, one `key value` pair per line.
    pub fn to_keyed(&self) -> String {
        let mut out = String::new();
        out.push_str("emogait-report v1\n");
        out.push_str(&format!("classifier {}\n", self.classifier));
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("k {}\n", self.k));
        out.push_str(&format!(
            "classes {}\n",
            self.classes
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ));
        for (i, row) in self.confusion.iter().enumerate() {
            let counts: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "confusion {} {}\n",
                self.classes[i].as_str(),
                counts.join(",")
            ));
        }
        let folds: Vec<String> = self
            .fold_accuracies
            .iter()
            .map(|a| format!("{a:.16e}"))
            .collect();
        out.push_str(&format!("fold_accuracies {}\n", folds.join(",")));
        out.push_str(&format!("accuracy {:.16e}\n", self.accuracy));
        out
    }
}

/// Partitions the dataset into `k` disjoint folds: each class is shuffled
/// with a generator seeded by `seed` and dealt round-robin, so per-fold
/// class counts differ from proportionality by at most one.
pub fn stratified_kfold(
    d: &LabeledDataset,
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>, ClassifyError> {
    if k < 2 {
        return Err(ClassifyError::BadFoldCount(k));
    }
    let classes = d.classes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    for class in classes {
        let mut indices: Vec<usize> = d
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label == class)
            .map(|(i, _)| i)
            .collect();
        if indices.len() < k {
            return Err(ClassifyError::TooFewPerClass {
                label: class,
                count: indices.len(),
                k,
            });
        }
        indices.shuffle(&mut rng);
        for (i, idx) in indices.into_iter().enumerate() {
            folds[i % k].push(idx);
        }
    }
    Ok(folds)
}

/// Runs stratified k-fold cross-validation: for every fold, trains on the
/// remaining rows and scores the held-out rows, accumulating one shared
/// confusion matrix.
pub fn cross_validate(
    d: &LabeledDataset,
    spec: &ClassifierSpec,
    k: usize,
    seed: u64,
) -> Result<EvalReport, ClassifyError> {
    let folds = stratified_kfold(d, k, seed)?;
    let classes = d.classes();
    let class_index = |l: EmotionLabel| classes.iter().position(|&c| c == l).unwrap();
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    let mut fold_accuracies = Vec::with_capacity(k);
    for (fold_no, fold) in folds.iter().enumerate() {
        let train_indices: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != fold_no)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        let train = d.subset(&train_indices);
        let mut correct = 0usize;
        match spec {
            ClassifierSpec::Gnb => {
                let model = train_gnb(&train)?;
                for &i in fold {
                    let row = &d.rows()[i];
                    let (pred, _) = model.predict(&row.features)?;
                    confusion[class_index(row.label)][class_index(pred)] += 1;
                    if pred == row.label {
                        correct += 1;
                    }
                }
            }
            ClassifierSpec::Svm(params) => {
                // Per-fold seed so fold runs stay independent but the
                // whole CV is reproducible from one seed.
                let fold_params = SvmParams {
                    seed: seed.wrapping_add(fold_no as u64),
                    ..params.clone()
                };
                let model = train_svm_smo(&train, &fold_params)?;
                for &i in fold {
                    let row = &d.rows()[i];
                    let (pred, _) = model.predict(&row.features)?;
                    confusion[class_index(row.label)][class_index(pred)] += 1;
                    if pred == row.label {
                        correct += 1;
                    }
                }
            }
        }
        fold_accuracies.push(100.0 * correct as f64 / fold.len() as f64);
    }
    let total: usize = confusion.iter().map(|r| r.iter().sum::<usize>()).sum();
    let trace: usize = (0..classes.len()).map(|i| confusion[i][i]).sum();
    Ok(EvalReport {
        classifier: spec.id().to_string(),
        seed,
        k,
        classes,
        confusion,
        fold_accuracies,
        accuracy: 100.0 * trace as f64 / total as f64,
    })
}
