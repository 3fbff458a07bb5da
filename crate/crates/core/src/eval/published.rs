//! Published benchmark figures for the geometry, physics and precalculus
//! textbook datasets, used to print side-by-side deltas. Precision, recall
//! and F1 are percentages; AUPRC is a fraction.

use serde::Serialize;

use crate::classify::ModelKind;
use crate::features::FeatureSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Geometry,
    Physics,
    Precalculus,
}

impl Domain {
    pub fn parse(s: &str) -> Option<Domain> {
        match s.to_ascii_lowercase().as_str() {
            "geometry" => Some(Domain::Geometry),
            "physics" => Some(Domain::Physics),
            "precalculus" => Some(Domain::Precalculus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Published {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auprc: Option<f64>,
}

const fn p(precision: f64, recall: f64, f1: f64, auprc: Option<f64>) -> Published {
    Published {
        precision,
        recall,
        f1,
        auprc,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatMethod {
    Proposed,
    RefdEqual,
    RefdTfidf,
}

pub fn statistical(domain: Domain, method: StatMethod) -> Published {
    use Domain::*;
    use StatMethod::*;
    match (domain, method) {
        (Geometry, Proposed) => p(62.2, 49.3, 54.9, Some(0.70)),
        (Geometry, RefdEqual) => p(50.6, 71.5, 59.1, Some(0.60)),
        (Geometry, RefdTfidf) => p(39.3, 80.1, 52.7, Some(0.38)),
        (Physics, Proposed) => p(60.8, 58.5, 59.6, Some(0.69)),
        (Physics, RefdEqual) => p(42.1, 60.8, 49.7, Some(0.43)),
        (Physics, RefdTfidf) => p(32.2, 71.1, 44.2, Some(0.35)),
        (Precalculus, Proposed) => p(68.6, 54.4, 60.4, Some(0.75)),
        (Precalculus, RefdEqual) => p(62.1, 82.4, 70.7, Some(0.73)),
        (Precalculus, RefdTfidf) => p(54.0, 73.4, 61.8, Some(0.61)),
    }
}

/// Tuned threshold reported for the statistical method.
pub fn theta(domain: Domain) -> f64 {
    match domain {
        Domain::Geometry => 0.06,
        Domain::Physics => 0.12,
        Domain::Precalculus => 0.04,
    }
}

/// Supervised results; `None` for the book-only feature set, which has no
/// published counterpart.
pub fn supervised(domain: Domain, set: FeatureSet, model: ModelKind) -> Option<Published> {
    use Domain::*;
    use ModelKind::*;
    let gtc = set == FeatureSet::Gtc;
    if set == FeatureSet::BookOnly {
        return None;
    }
    Some(match (domain, model, gtc) {
        (Geometry, RandomForest, true) => p(94.5, 85.8, 89.9, None),
        (Geometry, LinearSvm, true) => p(82.3, 66.3, 73.4, None),
        (Geometry, LogisticRegression, true) => p(84.2, 62.0, 71.4, None),
        (Geometry, NaiveBayes, true) => p(84.6, 44.7, 58.4, None),
        (Geometry, RandomForest, false) => p(94.4, 88.6, 91.4, None),
        (Geometry, LinearSvm, false) => p(83.6, 69.0, 75.5, None),
        (Geometry, LogisticRegression, false) => p(84.8, 64.7, 73.3, None),
        (Geometry, NaiveBayes, false) => p(84.8, 44.5, 58.3, None),
        (Physics, RandomForest, true) => p(82.6, 62.1, 70.8, None),
        (Physics, LinearSvm, true) => p(77.4, 52.1, 62.2, None),
        (Physics, LogisticRegression, true) => p(78.2, 48.3, 59.6, None),
        (Physics, NaiveBayes, true) => p(54.0, 72.4, 61.6, None),
        (Physics, RandomForest, false) => p(85.4, 66.1, 74.4, None),
        (Physics, LinearSvm, false) => p(77.5, 55.5, 64.6, None),
        (Physics, LogisticRegression, false) => p(76.8, 52.5, 62.2, None),
        (Physics, NaiveBayes, false) => p(59.7, 72.3, 65.2, None),
        (Precalculus, RandomForest, true) => p(89.8, 90.1, 89.9, None),
        (Precalculus, LinearSvm, true) => p(88.6, 86.1, 87.2, None),
        (Precalculus, LogisticRegression, true) => p(86.2, 81.9, 83.9, None),
        (Precalculus, NaiveBayes, true) => p(81.1, 78.1, 79.2, None),
        (Precalculus, RandomForest, false) => p(90.9, 90.3, 90.5, None),
        (Precalculus, LinearSvm, false) => p(89.0, 87.5, 88.2, None),
        (Precalculus, LogisticRegression, false) => p(85.9, 83.2, 84.4, None),
        (Precalculus, NaiveBayes, false) => p(81.1, 76.3, 78.3, None),
    })
}

/// Dataset sizes: concepts, pairs, positive pairs.
pub fn dataset_size(domain: Domain) -> (usize, usize, usize) {
    match domain {
        Domain::Geometry => (89, 1681, 524),
        Domain::Physics => (152, 1962, 487),
        Domain::Precalculus => (113, 918, 338),
    }
}

/// Measured minus published, with measured fractions scaled to percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Delta {
    pub published: Published,
    pub d_precision: f64,
    pub d_recall: f64,
    pub d_f1: f64,
    pub d_auprc: Option<f64>,
}

pub fn delta(published: Published, precision: f64, recall: f64, f1: f64, auprc: Option<f64>) -> Delta {
    Delta {
        published,
        d_precision: 100.0 * precision - published.precision,
        d_recall: 100.0 * recall - published.recall,
        d_f1: 100.0 * f1 - published.f1,
        d_auprc: published.auprc.zip(auprc).map(|(p, m)| m - p),
    }
}
