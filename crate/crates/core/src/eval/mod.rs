//! Cross-validated evaluation of the threshold and supervised methods.

pub mod metrics;
pub mod published;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{predict, theta_grid, train, tune_threshold, ClassifyError, ModelKind, TrainConfig};
use crate::corpus::LabeledPair;
use crate::features::{FeatureSet, FeatureTable};
use crate::matrix::PrereqMatrix;
use metrics::{auprc, average_precision, pr_curve, prf, PrPoint};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{0} pairs cannot be split into {1} folds")]
    TooFewPairs(usize, usize),
    #[error("fold count must be at least 2, got {0}")]
    BadFoldCount(usize),
    #[error("length mismatch: {0} predictions vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("no instances")]
    Empty,
    #[error("no positive labels")]
    NoPositives,
    #[error("feature rows are unlabeled")]
    Unlabeled,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvConfig {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            k: 5,
            seed: 42,
            stratified: true,
        }
    }
}

/// Assignment of every pair to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldSplit {
    pub k: usize,
    pub seed: u64,
    pub assignments: Vec<usize>,
}

impl FoldSplit {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }
}

/// Shuffled partition into `k` folds. When stratified, positives and
/// negatives are shuffled separately and dealt round-robin, positives
/// first, so every fold's class counts differ by at most one.
pub fn kfold_split(labels: &[u8], cv: CvConfig) -> Result<FoldSplit, EvalError> {
    if cv.k < 2 {
        return Err(EvalError::BadFoldCount(cv.k));
    }
    if labels.len() < cv.k {
        return Err(EvalError::TooFewPairs(labels.len(), cv.k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cv.seed);
    let order: Vec<usize> = if cv.stratified {
        let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 1).collect();
        let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] != 1).collect();
        pos.shuffle(&mut rng);
        neg.shuffle(&mut rng);
        pos.into_iter().chain(neg).collect()
    } else {
        let mut all: Vec<usize> = (0..labels.len()).collect();
        all.shuffle(&mut rng);
        all
    };
    let mut assignments = vec![0; labels.len()];
    for (slot, &i) in order.iter().enumerate() {
        assignments[i] = slot % cv.k;
    }
    Ok(FoldSplit {
        k: cv.k,
        seed: cv.seed,
        assignments,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auprc: Option<f64>,
}

/// Cross-validated result of a score-threshold method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub method: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Trapezoidal area over all pairs scored at once.
    pub auprc: f64,
    /// Mean of per-fold areas, over folds with a positive.
    pub auprc_fold_mean: f64,
    pub average_precision: f64,
    pub threshold_mean: f64,
    pub folds: Vec<FoldResult>,
    pub pr_curve: Vec<PrPoint>,
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Tunes a threshold on the training folds, applies it on the test fold,
/// and averages. The area under the curve pools all scores.
pub fn evaluate_threshold(
    method: &str,
    scores: &[f64],
    labels: &[u8],
    grid: &[f64],
    cv: CvConfig,
) -> Result<ThresholdReport, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    let split = kfold_split(labels, cv)?;
    let mut folds = Vec::with_capacity(cv.k);
    for fold in 0..cv.k {
        let train_idx = split.train_indices(fold);
        let test_idx = split.test_indices(fold);
        let scored: Vec<(f64, u8)> = train_idx.iter().map(|&i| (scores[i], labels[i])).collect();
        let (threshold, _) = tune_threshold(&scored, grid)?;
        let preds: Vec<u8> = test_idx.iter().map(|&i| (scores[i] > threshold) as u8).collect();
        let truth: Vec<u8> = test_idx.iter().map(|&i| labels[i]).collect();
        let m = prf(&preds, &truth)?;
        let test_scores: Vec<f64> = test_idx.iter().map(|&i| scores[i]).collect();
        folds.push(FoldResult {
            fold,
            threshold,
            precision: m.precision,
            recall: m.recall,
            f1: m.f1,
            auprc: auprc(&test_scores, &truth).ok(),
        });
    }
    Ok(ThresholdReport {
        method: method.to_string(),
        precision: mean(folds.iter().map(|f| f.precision)),
        recall: mean(folds.iter().map(|f| f.recall)),
        f1: mean(folds.iter().map(|f| f.f1)),
        auprc: auprc(scores, labels)?,
        auprc_fold_mean: mean(folds.iter().filter_map(|f| f.auprc)),
        average_precision: average_precision(scores, labels)?,
        threshold_mean: mean(folds.iter().map(|f| f.threshold)),
        pr_curve: pr_curve(scores, labels)?,
        folds,
    })
}

pub fn pair_labels(pairs: &[LabeledPair]) -> Vec<u8> {
    pairs.iter().map(|p| p.label).collect()
}

/// Matrix entries for each labeled pair.
pub fn matrix_scores(m: &PrereqMatrix, pairs: &[LabeledPair]) -> Vec<f64> {
    pairs.iter().map(|p| m.get(p.target, p.candidate)).collect()
}

/// The statistical method: threshold tuned over `0.00..=1.00` on the
/// matrix entries.
pub fn run_statistical(
    method: &str,
    omega: &PrereqMatrix,
    pairs: &[LabeledPair],
    cv: CvConfig,
) -> Result<ThresholdReport, EvalError> {
    evaluate_threshold(method, &matrix_scores(omega, pairs), &pair_labels(pairs), &theta_grid(), cv)
}

/// `-1.00, -0.98, ..., 1.00`, the threshold grid for RefD scores.
pub fn refd_grid() -> Vec<f64> {
    (0..=100).map(|i| (i as f64 - 50.0) / 50.0).collect()
}

/// Sweep of the threshold rule over the full grid on all pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn sweep(scores: &[f64], labels: &[u8]) -> Result<Vec<SweepRow>, EvalError> {
    theta_grid()
        .into_iter()
        .map(|theta| {
            let preds: Vec<u8> = scores.iter().map(|&s| (s > theta) as u8).collect();
            let m = prf(&preds, labels)?;
            Ok(SweepRow {
                theta,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupervisedResult {
    pub feature_set: FeatureSet,
    pub model: ModelKind,
    pub features: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auprc: f64,
    pub folds: Vec<FoldResult>,
}

/// Cross-validated P/R/F1 for every model on every feature set. Folds are
/// shared by all combinations.
pub fn run_supervised(
    table: &FeatureTable,
    models: &[ModelKind],
    sets: &[FeatureSet],
    cv: CvConfig,
    cfg: &TrainConfig,
) -> Result<Vec<SupervisedResult>, EvalError> {
    let labels = table.labels().ok_or(EvalError::Unlabeled)?;
    let split = kfold_split(&labels, cv)?;
    let mut results = Vec::new();
    for &set in sets {
        let view = table.select(set);
        for &model in models {
            let mut scores = vec![0.0; labels.len()];
            let mut folds = Vec::with_capacity(cv.k);
            for fold in 0..cv.k {
                let train_idx = split.train_indices(fold);
                let test_idx = split.test_indices(fold);
                let fitted = train(&view.subset(&train_idx), model, cv.seed, cfg)?;
                let out = predict(&fitted, &view.subset(&test_idx))?;
                let truth: Vec<u8> = test_idx.iter().map(|&i| labels[i]).collect();
                let preds: Vec<u8> = out.iter().map(|p| p.label).collect();
                for (&i, p) in test_idx.iter().zip(&out) {
                    scores[i] = p.score;
                }
                let m = prf(&preds, &truth)?;
                let fold_scores: Vec<f64> = out.iter().map(|p| p.score).collect();
                folds.push(FoldResult {
                    fold,
                    threshold: if model == ModelKind::LinearSvm { 0.0 } else { 0.5 },
                    precision: m.precision,
                    recall: m.recall,
                    f1: m.f1,
                    auprc: auprc(&fold_scores, &truth).ok(),
                });
            }
            results.push(SupervisedResult {
                feature_set: set,
                model,
                features: view.names.len(),
                precision: mean(folds.iter().map(|f| f.precision)),
                recall: mean(folds.iter().map(|f| f.recall)),
                f1: mean(folds.iter().map(|f| f.f1)),
                auprc: auprc(&scores, &labels)?,
                folds,
            });
        }
    }
    Ok(results)
}
