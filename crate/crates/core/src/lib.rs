//! Prerequisite relations between educational concepts, mined from a
//! structured textbook and the concepts' Wikipedia pages.
//!
//! The book side places every concept in the textbook ([`resolver`]),
//! scores explicit mentions with TF-IDF, closes them transitively and
//! filters by teaching order ([`matrix`]). The result either feeds a
//! threshold rule directly or contributes two features to supervised
//! models alongside link-graph and page-text features ([`features`],
//! [`classify`]). [`eval`] runs the cross-validated comparisons.

pub mod classify;
pub mod corpus;
pub mod dag;
pub mod eval;
pub mod features;
pub mod matrix;
pub mod pipeline;
pub mod resolver;
pub mod textstats;

use thiserror::Error;

/// Any error from the library, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus: {0}")]
    Corpus(#[from] corpus::CorpusError),
    #[error("matrix: {0}")]
    Matrix(#[from] matrix::MatrixError),
    #[error("features: {0}")]
    Features(#[from] features::FeatureError),
    #[error("classify: {0}")]
    Classify(#[from] classify::ClassifyError),
    #[error("eval: {0}")]
    Eval(#[from] eval::EvalError),
    #[error("export: {0}")]
    Dag(#[from] dag::DagError),
}

pub type Result<T> = std::result::Result<T, Error>;
