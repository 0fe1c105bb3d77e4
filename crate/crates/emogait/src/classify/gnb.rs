//! Gaussian naive Bayes with per-class diagonal Gaussians.

use super::{ClassifyError, LabeledDataset};
use crate::skeleton::EmotionLabel;

/// Minimum per-feature variance. Recentering zeroes the SpineBase
/// columns, which would otherwise produce singular densities.
pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNbModel {
    /// Classes in canonical label order; ties in prediction break toward
    /// the earlier entry.
    pub classes: Vec<EmotionLabel>,
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
    pub width: usize,
}

/// Fits per-class feature means and population variances (divisor `n`,
/// floored at [`VARIANCE_FLOOR`]) plus empirical class priors.
pub fn train_gnb(d: &LabeledDataset) -> Result<GaussianNbModel, ClassifyError> {
    let classes = d.classes();
    if classes.len() < 2 {
        return Err(ClassifyError::SingleClass);
    }
    let width = d.width();
    let total = d.len() as f64;
    let mut priors = Vec::with_capacity(classes.len());
    let mut means = Vec::with_capacity(classes.len());
    let mut variances = Vec::with_capacity(classes.len());
    for &class in &classes {
        let rows: Vec<&Vec<f64>> = d
            .rows()
            .iter()
            .filter(|r| r.label == class)
            .map(|r| &r.features)
            .collect();
        if rows.len() < 2 {
            return Err(ClassifyError::DegenerateClass(class));
        }
        let n = rows.len() as f64;
        let mut mean = vec![0.0; width];
        for row in &rows {
            for (m, v) in mean.iter_mut().zip(row.iter()) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        let mut var = vec![0.0; width];
        for row in &rows {
            for ((s, v), m) in var.iter_mut().zip(row.iter()).zip(&mean) {
                let dv = v - m;
                *s += dv * dv;
            }
        }
        for s in &mut var {
            *s = (*s / n).max(VARIANCE_FLOOR);
        }
        priors.push(n / total);
        means.push(mean);
        variances.push(var);
    }
    Ok(GaussianNbModel {
        classes,
        priors,
        means,
        variances,
        width,
    })
}

impl GaussianNbModel {
    /// Predicted label plus the per-class unnormalized log-posteriors.
    pub fn predict(&self, x: &[f64]) -> Result<(EmotionLabel, Vec<f64>), ClassifyError> {
        if x.len() != self.width {
            return Err(ClassifyError::WidthMismatch {
                expected: self.width,
                got: x.len(),
            });
        }
        let log_posteriors: Vec<f64> = (0..self.classes.len())
            .map(|c| {
                let mut lp = self.priors[c].ln();
                for ((v, m), var) in x.iter().zip(&self.means[c]).zip(&self.variances[c]) {
                    let d = v - m;
                    lp += -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + d * d / var);
                }
                lp
            })
            .collect();
        let mut best = 0;
        for (c, lp) in log_posteriors.iter().enumerate().skip(1) {
            if *lp > log_posteriors[best] {
                best = c;
            }
        }
        Ok((self.classes[best], log_posteriors))
    }
}
