//! Linear SVM trained by simplified sequential minimal optimization.
//!
//! Features are z-score standardized with statistics computed on the
//! training data; the standardization parameters travel with the model.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClassifyError, LabeledDataset};
use crate::skeleton::EmotionLabel;

#[derive(Debug, Clone, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: 1e-3,
            max_passes: 10,
            max_iterations: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel {
    /// Label mapped to the negative side (earlier in canonical order).
    pub negative: EmotionLabel,
    /// Label mapped to the positive side; a zero decision value predicts
    /// this class.
    pub positive: EmotionLabel,
    /// Weights in standardized feature space.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    /// Per-feature standardization statistics from the training data.
    pub feature_means: Vec<f64>,
    pub feature_stds: Vec<f64>,
    /// Full sweeps over the training data performed by SMO.
    pub iterations: usize,
    /// KKT violations beyond tolerance left at termination.
    pub kkt_violations_remaining: usize,
    /// True when every dual variable satisfied `0 <= alpha <= C` at
    /// termination.
    pub alpha_bounds_ok: bool,
    /// `|sum_i alpha_i * y_i|` at termination.
    pub dual_constraint_residual: f64,
    /// Set when the iteration cap was hit before convergence.
    pub converged: bool,
    /// Set when the trained weight vector is all zero.
    pub degenerate: bool,
}

/// Trains a linear SVM on a two-class dataset with simplified SMO:
/// pairwise dual updates with a seeded random second index, until
/// `max_passes` consecutive sweeps change nothing or the iteration cap is
/// reached. Non-convergence is flagged on the model, not an error.
pub fn train_svm_smo(
    d: &LabeledDataset,
    params: &SvmParams,
) -> Result<LinearSvmModel, ClassifyError> {
    if params.c <= 0.0 {
        return Err(ClassifyError::InvalidParam("C must be positive".into()));
    }
    if params.tol <= 0.0 {
        return Err(ClassifyError::InvalidParam("tol must be positive".into()));
    }
    let classes = d.classes();
    if classes.len() != 2 {
        return Err(ClassifyError::NotBinary(classes.len()));
    }
    let (negative, positive) = (classes[0], classes[1]);
    let n = d.len();
    let width = d.width();

    let (feature_means, feature_stds) = standardization(d);
    let xs: Vec<Vec<f64>> = d
        .rows()
        .iter()
        .map(|r| {
            r.features
                .iter()
                .zip(feature_means.iter().zip(&feature_stds))
                .map(|(v, (m, s))| (v - m) / s)
                .collect()
        })
        .collect();
    let ys: Vec<f64> = d
        .rows()
        .iter()
        .map(|r| if r.label == positive { 1.0 } else { -1.0 })
        .collect();

    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut alphas = vec![0.0f64; n];
    let mut w = vec![0.0f64; width];
    let mut b = 0.0f64;
    let c = params.c;
    let tol = params.tol;

    let mut passes = 0usize;
    let mut sweeps = 0usize;
    while passes < params.max_passes && sweeps < params.max_iterations {
        let mut changed = 0usize;
        for i in 0..n {
            let e_i = dot(&w, &xs[i]) + b - ys[i];
            if !((ys[i] * e_i < -tol && alphas[i] < c) || (ys[i] * e_i > tol && alphas[i] > 0.0)) {
                continue;
            }
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let e_j = dot(&w, &xs[j]) + b - ys[j];
            let (a_i_old, a_j_old) = (alphas[i], alphas[j]);
            let (lo, hi) = if (ys[i] - ys[j]).abs() > f64::EPSILON {
                ((a_j_old - a_i_old).max(0.0), (c + a_j_old - a_i_old).min(c))
            } else {
                ((a_i_old + a_j_old - c).max(0.0), (a_i_old + a_j_old).min(c))
            };
            if (hi - lo).abs() < f64::EPSILON {
                continue;
            }
            let k_ii = dot(&xs[i], &xs[i]);
            let k_jj = dot(&xs[j], &xs[j]);
            let k_ij = dot(&xs[i], &xs[j]);
            let eta = 2.0 * k_ij - k_ii - k_jj;
            if eta >= 0.0 {
                continue;
            }
            let mut a_j = a_j_old - ys[j] * (e_i - e_j) / eta;
            a_j = a_j.clamp(lo, hi);
            if (a_j - a_j_old).abs() < 1e-5 {
                continue;
            }
            let a_i = a_i_old + ys[i] * ys[j] * (a_j_old - a_j);
            let b1 = b - e_i - ys[i] * (a_i - a_i_old) * k_ii - ys[j] * (a_j - a_j_old) * k_ij;
            let b2 = b - e_j - ys[i] * (a_i - a_i_old) * k_ij - ys[j] * (a_j - a_j_old) * k_jj;
            b = if a_i > 0.0 && a_i < c {
                b1
            } else if a_j > 0.0 && a_j < c {
                b2
            } else {
                (b1 + b2) / 2.0
            };
            for (wk, (xi, xj)) in w.iter_mut().zip(xs[i].iter().zip(&xs[j])) {
                *wk += ys[i] * (a_i - a_i_old) * xi + ys[j] * (a_j - a_j_old) * xj;
            }
            alphas[i] = a_i;
            alphas[j] = a_j;
            changed += 1;
        }
        sweeps += 1;
        if changed == 0 {
            passes += 1;
        } else {
            passes = 0;
        }
    }
    let converged = passes >= params.max_passes;

    let kkt_violations_remaining = (0..n)
        .filter(|&i| {
            let margin = ys[i] * (dot(&w, &xs[i]) + b);
            (alphas[i] < c - f64::EPSILON && margin < 1.0 - tol)
                || (alphas[i] > f64::EPSILON && margin > 1.0 + tol)
        })
        .count();

    // Refit the bias from the free support vectors when any exist; the
    // running SMO estimate is kept otherwise.
    let free: Vec<usize> = (0..n)
        .filter(|&i| alphas[i] > f64::EPSILON && alphas[i] < c - f64::EPSILON)
        .collect();
    if !free.is_empty() {
        b = free.iter().map(|&i| ys[i] - dot(&w, &xs[i])).sum::<f64>() / free.len() as f64;
    }

    let degenerate = w.iter().all(|&v| v == 0.0);
    let alpha_bounds_ok = alphas.iter().all(|&a| (-1e-12..=c + 1e-12).contains(&a));
    let dual_constraint_residual = alphas
        .iter()
        .zip(&ys)
        .map(|(a, y)| a * y)
        .sum::<f64>()
        .abs();

    Ok(LinearSvmModel {
        negative,
        positive,
        weights: w,
        bias: b,
        c,
        feature_means,
        feature_stds,
        iterations: sweeps,
        kkt_violations_remaining,
        alpha_bounds_ok,
        dual_constraint_residual,
        converged,
        degenerate,
    })
}

fn standardization(d: &LabeledDataset) -> (Vec<f64>, Vec<f64>) {
    let width = d.width();
    let n = d.len() as f64;
    let mut means = vec![0.0; width];
    for r in d.rows() {
        for (m, v) in means.iter_mut().zip(&r.features) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut stds = vec![0.0; width];
    for r in d.rows() {
        for ((s, v), m) in stds.iter_mut().zip(&r.features).zip(&means) {
            let dv = v - m;
            *s += dv * dv;
        }
    }
    for s in &mut stds {
        *s = (*s / n).sqrt();
        // Constant columns pass through unscaled.
        if *s < 1e-12 {
            *s = 1.0;
        }
    }
    (means, stds)
}

impl LinearSvmModel {
    /// Predicted label and the raw decision value `w·x + b` (computed in
    /// standardized space). A decision value of exactly zero predicts the
    /// positive class.
    pub fn predict(&self, x: &[f64]) -> Result<(EmotionLabel, f64), ClassifyError> {
        if x.len() != self.weights.len() {
            return Err(ClassifyError::WidthMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        let decision: f64 = x
            .iter()
            .zip(self.feature_means.iter().zip(&self.feature_stds))
            .zip(&self.weights)
            .map(|((v, (m, s)), w)| w * (v - m) / s)
            .sum::<f64>()
            + self.bias;
        let label = if decision >= 0.0 {
            self.positive
        } else {
            self.negative
        };
        Ok((label, decision))
    }
}
