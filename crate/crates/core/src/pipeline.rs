//! End-to-end construction of the prerequisite matrix from a loaded corpus.

use serde::{Deserialize, Serialize};

use crate::corpus::{ConceptSet, Corpus, TextbookCorpus};
use crate::matrix::{apply_ordering, explicit_relations, implicit_closure, ClosureMode, PrereqMatrix};
use crate::resolver::{resolve_all, Resolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub ordering: bool,
    pub closure: ClosureMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            ordering: true,
            closure: ClosureMode::Fixpoint,
        }
    }
}

/// Every intermediate product of the book pipeline.
#[derive(Debug, Clone)]
pub struct BookAnalysis {
    pub book: TextbookCorpus,
    pub pages: Vec<Option<String>>,
    pub resolution: Resolution,
    pub explicit: PrereqMatrix,
    pub closed: PrereqMatrix,
    /// Ordering-filtered matrix; equal to the closed one when ordering is off.
    pub omega: PrereqMatrix,
    pub config: PipelineConfig,
}

impl BookAnalysis {
    pub fn ranks(&self) -> &[usize] {
        &self.resolution.ranks
    }

    /// Ordered matrix regardless of the configured mode.
    pub fn ordered(&self) -> PrereqMatrix {
        apply_ordering(&self.closed, &self.resolution.ranks)
    }
}

pub fn analyze(corpus: &Corpus, config: PipelineConfig) -> BookAnalysis {
    analyze_parts(
        &corpus.book.normalized(&corpus.synonyms),
        &corpus.concepts,
        corpus.normalized_pages(),
        config,
    )
}

/// Runs the pipeline on an already-normalized book and pages.
pub fn analyze_parts(
    book: &TextbookCorpus,
    concepts: &ConceptSet,
    pages: Vec<Option<String>>,
    config: PipelineConfig,
) -> BookAnalysis {
    let resolution = resolve_all(book, concepts, &pages);
    let explicit = explicit_relations(&resolution.placements, concepts, book);
    let closed = implicit_closure(&explicit, config.closure);
    let omega = if config.ordering {
        apply_ordering(&closed, &resolution.ranks)
    } else {
        closed.clone()
    };
    BookAnalysis {
        book: book.clone(),
        pages,
        resolution,
        explicit,
        closed,
        omega,
        config,
    }
}
