//! Binary classification metrics.

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Precision, recall and F1 from true-positive, false-positive and
/// false-negative counts.
pub fn prf_counts(tp: usize, fp: usize, fn_: usize) -> Prf {
    let precision = if tp + fp > 0 { tp as f64 / (tp + fp) as f64 } else { 0.0 };
    let recall = if tp + fn_ > 0 { tp as f64 / (tp + fn_) as f64 } else { 0.0 };
    Prf {
        precision,
        recall,
        f1: f1_score(precision, recall),
    }
}

pub fn prf(predictions: &[u8], labels: &[u8]) -> Result<Prf, EvalError> {
    if predictions.len() != labels.len() {
        return Err(EvalError::LengthMismatch(predictions.len(), labels.len()));
    }
    if labels.is_empty() {
        return Err(EvalError::Empty);
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p == 1, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(prf_counts(tp, fp, fn_))
}

/// A point on a precision-recall curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
}

fn check_scored(scores: &[f64], labels: &[u8]) -> Result<usize, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    if positives == 0 {
        return Err(EvalError::NoPositives);
    }
    Ok(positives)
}

/// Precision-recall points from ranking by descending score. One point is
/// emitted per distinct score (tied items enter together); the curve starts
/// at recall 0 with the first point's precision.
pub fn pr_curve(scores: &[f64], labels: &[u8]) -> Result<Vec<PrPoint>, EvalError> {
    let positives = check_scored(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = Vec::new();
    let (mut tp, mut seen) = (0usize, 0usize);
    for (k, &i) in order.iter().enumerate() {
        seen += 1;
        tp += labels[i] as usize;
        let group_ends = order.get(k + 1).map_or(true, |&next| scores[next] != scores[i]);
        if group_ends {
            points.push(PrPoint {
                recall: tp as f64 / positives as f64,
                precision: tp as f64 / seen as f64,
            });
        }
    }
    let anchor = PrPoint {
        recall: 0.0,
        precision: points[0].precision,
    };
    points.insert(0, anchor);
    Ok(points)
}

/// Trapezoidal area under a precision-recall curve, integrated over recall.
pub fn trapezoid_area(points: &[PrPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].recall - w[0].recall) * (w[0].precision + w[1].precision) / 2.0)
        .sum()
}

/// Area under the precision-recall curve by trapezoidal integration.
pub fn auprc(scores: &[f64], labels: &[u8]) -> Result<f64, EvalError> {
    Ok(trapezoid_area(&pr_curve(scores, labels)?))
}

/// Step-wise area: precision at each recall increment, weighted by the
/// increment.
pub fn average_precision(scores: &[f64], labels: &[u8]) -> Result<f64, EvalError> {
    let points = pr_curve(scores, labels)?;
    Ok(points
        .windows(2)
        .map(|w| (w[1].recall - w[0].recall) * w[1].precision)
        .sum())
}
