//! Classifiers: the threshold rule over matrix entries and four supervised
//! models over feature rows.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::metrics::prf_counts;
use crate::features::FeatureTable;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("theta {0} outside [0, 1]")]
    ThetaOutOfRange(f64),
    #[error("no positive labels; F1 is undefined")]
    NoPositives,
    #[error("training needs both classes, got only label {0}")]
    SingleClass(u8),
    #[error("no training rows")]
    Empty,
    #[error("row {0} has no label")]
    Unlabeled(usize),
    #[error("feature schema mismatch: model expects {expected:?}, rows have {got:?}")]
    SchemaMismatch { expected: Vec<String>, got: Vec<String> },
    #[error("unknown model kind {0:?} (expected rf, svm, lr or nb)")]
    UnknownKind(String),
}

/// Decision rule `score > theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdModel {
    theta: f64,
}

impl ThresholdModel {
    pub fn new(theta: f64) -> Result<Self, ClassifyError> {
        if (0.0..=1.0).contains(&theta) {
            Ok(ThresholdModel { theta })
        } else {
            Err(ClassifyError::ThetaOutOfRange(theta))
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

pub fn stat_classify(omega_ij: f64, model: ThresholdModel) -> u8 {
    (omega_ij > model.theta) as u8
}

pub const THETA_STEPS: usize = 50;

/// `0.00, 0.02, ..., 1.00`: 51 points.
pub fn theta_grid() -> Vec<f64> {
    (0..=THETA_STEPS).map(|i| i as f64 / THETA_STEPS as f64).collect()
}

/// F1 of the rule `score > threshold` on scored pairs.
pub fn f1_at(scored: &[(f64, u8)], threshold: f64) -> f64 {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for &(s, l) in scored {
        match (s > threshold, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            _ => {}
        }
    }
    prf_counts(tp, fp, fn_).f1
}

/// Grid point with the highest F1; the smallest such point on ties.
pub fn tune_threshold(scored: &[(f64, u8)], grid: &[f64]) -> Result<(f64, f64), ClassifyError> {
    if !scored.iter().any(|&(_, l)| l == 1) {
        return Err(ClassifyError::NoPositives);
    }
    let mut best = (grid[0], f1_at(scored, grid[0]));
    for &t in &grid[1..] {
        let f = f1_at(scored, t);
        if f > best.1 {
            best = (t, f);
        }
    }
    Ok(best)
}

pub fn tune_theta(scored: &[(f64, u8)]) -> Result<ThresholdModel, ClassifyError> {
    let (theta, _) = tune_threshold(scored, &theta_grid())?;
    ThresholdModel::new(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RandomForest,
    LinearSvm,
    LogisticRegression,
    NaiveBayes,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::RandomForest,
        ModelKind::LinearSvm,
        ModelKind::LogisticRegression,
        ModelKind::NaiveBayes,
    ];

    pub fn short(self) -> &'static str {
        match self {
            ModelKind::RandomForest => "rf",
            ModelKind::LinearSvm => "svm",
            ModelKind::LogisticRegression => "lr",
            ModelKind::NaiveBayes => "nb",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for ModelKind {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rf" | "random_forest" => Ok(ModelKind::RandomForest),
            "svm" | "linear_svm" => Ok(ModelKind::LinearSvm),
            "lr" | "logistic_regression" => Ok(ModelKind::LogisticRegression),
            "nb" | "naive_bayes" => Ok(ModelKind::NaiveBayes),
            other => Err(ClassifyError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Inverse regularization strength for LR and SVM.
    pub c: f64,
    pub trees: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// `None` grows trees until leaves are pure.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            trees: 200,
            learning_rate: 0.1,
            epochs: 1000,
            max_depth: None,
            min_leaf: 1,
        }
    }
}

/// Per-feature standardization fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let m = rows.len() as f64;
        let mut mean = vec![0.0; d];
        for r in rows {
            mean.iter_mut().zip(r).for_each(|(a, x)| *a += x);
        }
        mean.iter_mut().for_each(|a| *a /= m);
        let mut var = vec![0.0; d];
        for r in rows {
            for ((v, x), mu) in var.iter_mut().zip(r).zip(&mean) {
                *v += (x - mu) * (x - mu);
            }
        }
        let scale = var
            .into_iter()
            .map(|v| {
                let sd = (v / m).sqrt();
                if sd > 0.0 && sd.is_finite() {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(x, (mu, sd))| (x - mu) / sd)
            .collect()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }
}

/// L2-regularized logistic regression by full-batch gradient descent on
/// `|w|^2 / (2 C m) + mean log-loss`.
fn train_logistic(x: &[Vec<f64>], y: &[u8], cfg: &TrainConfig) -> LinearModel {
    let (m, d) = (x.len() as f64, x[0].len());
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let reg = 1.0 / (cfg.c * m);
    for _ in 0..cfg.epochs {
        let mut gw = vec![0.0; d];
        let mut gb = 0.0;
        for (xi, &yi) in x.iter().zip(y) {
            let err = sigmoid(dot(&w, xi) + b) - yi as f64;
            gw.iter_mut().zip(xi).for_each(|(g, v)| *g += err * v);
            gb += err;
        }
        for (wj, gj) in w.iter_mut().zip(&gw) {
            *wj -= cfg.learning_rate * (gj / m + reg * *wj);
        }
        b -= cfg.learning_rate * gb / m;
    }
    LinearModel { weights: w, bias: b }
}

/// Linear SVM by subgradient descent on `|w|^2 / (2 C m) + mean hinge`,
/// step size decaying as `1 / sqrt(t)`.
fn train_svm(x: &[Vec<f64>], y: &[u8], cfg: &TrainConfig) -> LinearModel {
    let (m, d) = (x.len() as f64, x[0].len());
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let reg = 1.0 / (cfg.c * m);
    for epoch in 0..cfg.epochs {
        let lr = cfg.learning_rate / ((epoch + 1) as f64).sqrt();
        let mut gw = vec![0.0; d];
        let mut gb = 0.0;
        for (xi, &yi) in x.iter().zip(y) {
            let t = if yi == 1 { 1.0 } else { -1.0 };
            if t * (dot(&w, xi) + b) < 1.0 {
                gw.iter_mut().zip(xi).for_each(|(g, v)| *g -= t * v);
                gb -= t;
            }
        }
        for (wj, gj) in w.iter_mut().zip(&gw) {
            *wj -= lr * (gj / m + reg * *wj);
        }
        b -= lr * gb / m;
    }
    LinearModel { weights: w, bias: b }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    /// Indexed by class 0 and 1.
    pub log_prior: [f64; 2],
    pub mean: [Vec<f64>; 2],
    pub var: [Vec<f64>; 2],
}

fn train_nb(x: &[Vec<f64>], y: &[u8]) -> GaussianNb {
    let d = x[0].len();
    // variance floor relative to the largest feature variance
    let all_var = {
        let s = Standardizer::fit(x);
        s.scale.iter().map(|v| v * v).fold(0.0, f64::max)
    };
    let eps = 1e-9 * all_var.max(1e-300);
    let mut out = GaussianNb {
        log_prior: [0.0; 2],
        mean: [vec![0.0; d], vec![0.0; d]],
        var: [vec![0.0; d], vec![0.0; d]],
    };
    for class in 0..2u8 {
        let rows: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, &l)| l == class).map(|(r, _)| r).collect();
        let c = class as usize;
        let k = rows.len() as f64;
        out.log_prior[c] = (k / x.len() as f64).ln();
        for j in 0..d {
            let mu = rows.iter().map(|r| r[j]).sum::<f64>() / k;
            let var = rows.iter().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / k;
            out.mean[c][j] = mu;
            out.var[c][j] = var + eps;
        }
    }
    out
}

impl GaussianNb {
    fn prob_positive(&self, x: &[f64]) -> f64 {
        let ll = |c: usize| {
            self.log_prior[c]
                + x.iter()
                    .zip(self.mean[c].iter().zip(&self.var[c]))
                    .map(|(v, (mu, var))| {
                        -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (v - mu).powi(2) / (2.0 * var)
                    })
                    .sum::<f64>()
        };
        let (l0, l1) = (ll(0), ll(1));
        sigmoid(l1 - l0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        class: u8,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART classification tree grown with Gini impurity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn predict(&self, x: &[f64]) -> u8 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { class } => return *class,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

fn best_split(
    x: &[Vec<f64>],
    y: &[u8],
    samples: &[usize],
    features: &[usize],
    min_leaf: usize,
) -> Option<SplitChoice> {
    let total = samples.len();
    let total_pos: usize = samples.iter().map(|&i| y[i] as usize).sum();
    let mut best: Option<SplitChoice> = None;
    let mut sorted = samples.to_vec();
    for &f in features {
        sorted.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]));
        let mut left_pos = 0;
        for k in 1..total {
            left_pos += y[sorted[k - 1]] as usize;
            let (lo, hi) = (x[sorted[k - 1]][f], x[sorted[k]][f]);
            if lo == hi || k < min_leaf || total - k < min_leaf {
                continue;
            }
            let impurity = (k as f64 * gini(left_pos, k)
                + (total - k) as f64 * gini(total_pos - left_pos, total - k))
                / total as f64;
            if best.as_ref().map_or(true, |b| impurity < b.impurity) {
                let mid = lo + (hi - lo) / 2.0;
                best = Some(SplitChoice {
                    feature: f,
                    threshold: if mid < hi { mid } else { lo },
                    impurity,
                });
            }
        }
    }
    best
}

fn grow_tree(
    x: &[Vec<f64>],
    y: &[u8],
    samples: Vec<usize>,
    mtry: usize,
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> DecisionTree {
    let d = x[0].len();
    let mut nodes = vec![TreeNode::Leaf { class: 0 }];
    let mut stack = vec![(0usize, samples, 0usize)];
    while let Some((slot, samples, depth)) = stack.pop() {
        let pos: usize = samples.iter().map(|&i| y[i] as usize).sum();
        let majority = (2 * pos > samples.len()) as u8;
        let pure = pos == 0 || pos == samples.len();
        let depth_ok = cfg.max_depth.map_or(true, |m| depth < m);
        if pure || !depth_ok || samples.len() < 2 * cfg.min_leaf.max(1) {
            nodes[slot] = TreeNode::Leaf { class: majority };
            continue;
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(rng);
        let mut split = best_split(x, y, &samples, &order[..mtry], cfg.min_leaf);
        if split.is_none() {
            split = best_split(x, y, &samples, &order[mtry..], cfg.min_leaf);
        }
        let Some(split) = split else {
            nodes[slot] = TreeNode::Leaf { class: majority };
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| x[i][split.feature] <= split.threshold);
        let (l, r) = (nodes.len(), nodes.len() + 1);
        nodes.push(TreeNode::Leaf { class: 0 });
        nodes.push(TreeNode::Leaf { class: 0 });
        nodes[slot] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: l,
            right: r,
        };
        stack.push((r, right, depth + 1));
        stack.push((l, left, depth + 1));
    }
    DecisionTree { nodes }
}

/// Seed of tree `t` in a forest seeded with `seed`.
fn tree_seed(seed: u64, t: usize) -> u64 {
    seed ^ (t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn train_forest(x: &[Vec<f64>], y: &[u8], cfg: &TrainConfig, seed: u64) -> Vec<DecisionTree> {
    let (m, d) = (x.len(), x[0].len());
    let mtry = ((d as f64).sqrt().floor() as usize).clamp(1, d);
    (0..cfg.trees.max(1))
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(tree_seed(seed, t));
            let bootstrap: Vec<usize> = (0..m).map(|_| rng.gen_range(0..m)).collect();
            grow_tree(x, y, bootstrap, mtry, cfg, &mut rng)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelParams {
    RandomForest { trees: Vec<DecisionTree> },
    LinearSvm(LinearModel),
    LogisticRegression(LinearModel),
    NaiveBayes(GaussianNb),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: u8,
    /// Probability for LR and NB, margin for SVM, vote fraction for RF.
    pub score: f64,
}

/// A fitted model plus the schema and standardization it was trained with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedClassifier {
    pub kind: ModelKind,
    pub feature_schema: Vec<String>,
    pub seed: u64,
    pub config: TrainConfig,
    pub standardizer: Standardizer,
    pub parameters: ModelParams,
}

fn training_data(rows: &FeatureTable) -> Result<(Vec<Vec<f64>>, Vec<u8>), ClassifyError> {
    if rows.rows.is_empty() {
        return Err(ClassifyError::Empty);
    }
    let mut y = Vec::with_capacity(rows.rows.len());
    for (i, r) in rows.rows.iter().enumerate() {
        y.push(r.label.ok_or(ClassifyError::Unlabeled(i))?);
    }
    if let Some(&only) = y.first().filter(|&&f| y.iter().all(|&l| l == f)) {
        return Err(ClassifyError::SingleClass(only));
    }
    Ok((rows.rows.iter().map(|r| r.values.clone()).collect(), y))
}

pub fn train(
    rows: &FeatureTable,
    kind: ModelKind,
    seed: u64,
    cfg: &TrainConfig,
) -> Result<TrainedClassifier, ClassifyError> {
    let (raw, y) = training_data(rows)?;
    let standardizer = Standardizer::fit(&raw);
    let x: Vec<Vec<f64>> = raw.iter().map(|r| standardizer.transform(r)).collect();
    let parameters = if x[0].is_empty() {
        // no features: every model degenerates to the prior
        let nb = train_nb(&x, &y);
        ModelParams::NaiveBayes(nb)
    } else {
        match kind {
            ModelKind::RandomForest => ModelParams::RandomForest {
                trees: train_forest(&x, &y, cfg, seed),
            },
            ModelKind::LinearSvm => ModelParams::LinearSvm(train_svm(&x, &y, cfg)),
            ModelKind::LogisticRegression => ModelParams::LogisticRegression(train_logistic(&x, &y, cfg)),
            ModelKind::NaiveBayes => ModelParams::NaiveBayes(train_nb(&x, &y)),
        }
    };
    Ok(TrainedClassifier {
        kind,
        feature_schema: rows.names.clone(),
        seed,
        config: *cfg,
        standardizer,
        parameters,
    })
}

impl TrainedClassifier {
    fn predict_one(&self, raw: &[f64]) -> Prediction {
        let x = self.standardizer.transform(raw);
        match &self.parameters {
            ModelParams::RandomForest { trees } => {
                let votes: usize = trees.iter().map(|t| t.predict(&x) as usize).sum();
                let score = votes as f64 / trees.len() as f64;
                Prediction {
                    label: (score > 0.5) as u8,
                    score,
                }
            }
            ModelParams::LinearSvm(m) => {
                let score = m.decision(&x);
                Prediction {
                    label: (score > 0.0) as u8,
                    score,
                }
            }
            ModelParams::LogisticRegression(m) => {
                let score = sigmoid(m.decision(&x));
                Prediction {
                    label: (score > 0.5) as u8,
                    score,
                }
            }
            ModelParams::NaiveBayes(nb) => {
                let score = nb.prob_positive(&x);
                Prediction {
                    label: (score > 0.5) as u8,
                    score,
                }
            }
        }
    }
}

pub fn predict(model: &TrainedClassifier, rows: &FeatureTable) -> Result<Vec<Prediction>, ClassifyError> {
    if rows.names != model.feature_schema {
        return Err(ClassifyError::SchemaMismatch {
            expected: model.feature_schema.clone(),
            got: rows.names.clone(),
        });
    }
    Ok(rows.rows.iter().map(|r| model.predict_one(&r.values)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureRow;

    fn table(names: &[&str], data: &[(Vec<f64>, u8)]) -> FeatureTable {
        FeatureTable {
            names: names.iter().map(|s| s.to_string()).collect(),
            rows: data
                .iter()
                .enumerate()
                .map(|(i, (v, l))| FeatureRow {
                    target: format!("t{i}"),
                    candidate: format!("c{i}"),
                    label: Some(*l),
                    values: v.clone(),
                    missing_page: false,
                })
                .collect(),
        }
    }

    #[test]
    fn threshold_rule() {
        let m = ThresholdModel::new(0.06).unwrap();
        assert_eq!(stat_classify(0.07, m), 1);
        assert_eq!(stat_classify(0.0, ThresholdModel::new(0.0).unwrap()), 0);
        assert_eq!(stat_classify(0.06, m), 0);
        assert!(ThresholdModel::new(1.5).is_err());
    }

    #[test]
    fn grid_has_51_points() {
        let g = theta_grid();
        assert_eq!(g.len(), 51);
        assert_eq!(g[3], 0.06);
        assert_eq!(g[50], 1.0);
    }

    #[test]
    fn tuning_examples() {
        let separated = [(0.5, 1), (0.5, 1), (0.01, 0), (0.01, 0)];
        assert_eq!(tune_theta(&separated).unwrap().theta(), 0.02);
        let flat = [(0.0, 1), (0.0, 0)];
        assert_eq!(tune_theta(&flat).unwrap().theta(), 0.0);
        assert!(matches!(tune_theta(&[(0.3, 0)]), Err(ClassifyError::NoPositives)));
    }

    #[test]
    fn single_class_rejected() {
        let t = table(&["x"], &[(vec![1.0], 1), (vec![2.0], 1)]);
        assert!(matches!(
            train(&t, ModelKind::LogisticRegression, 0, &TrainConfig::default()),
            Err(ClassifyError::SingleClass(1))
        ));
    }

    #[test]
    fn schema_checked() {
        let t = table(&["x"], &[(vec![0.0], 0), (vec![1.0], 1)]);
        let m = train(&t, ModelKind::NaiveBayes, 0, &TrainConfig::default()).unwrap();
        let other = table(&["y"], &[(vec![0.0], 0)]);
        assert!(matches!(predict(&m, &other), Err(ClassifyError::SchemaMismatch { .. })));
        assert!(predict(&m, &table(&["x"], &[])).unwrap().is_empty());
    }

    #[test]
    fn kinds_parse() {
        for k in ModelKind::ALL {
            assert_eq!(k.short().parse::<ModelKind>().unwrap(), k);
        }
        assert!("xgb".parse::<ModelKind>().is_err());
    }
}
