//! The prerequisite confidence matrix: explicit relations from concept
//! content, max-min transitive closure, and the teaching-order filter.
//!
//! Entry `(i, j)` is the confidence that concept `j` is a prerequisite of
//! concept `i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ConceptSet, TextbookCorpus};
use crate::resolver::ConceptPlacement;
use crate::textstats::{tokenize, ConceptTfidf};

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("concept index {0} out of range for a {1}x{1} matrix")]
    OutOfRange(usize, usize),
    #[error("matrix has {rows} rows of which one has {len} entries")]
    Ragged { rows: usize, len: usize },
    #[error("negative or non-finite entry at ({0}, {1})")]
    BadEntry(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Explicit,
    Closed,
    Ordered,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Explicit => "explicit",
            Stage::Closed => "closed",
            Stage::Ordered => "ordered",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMode {
    /// Iterate max-min composition until nothing changes.
    #[default]
    Fixpoint,
    /// A single composition step (paths of length two only).
    SinglePass,
}

/// Dense `n x n` nonnegative matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PrereqMatrix {
    n: usize,
    values: Vec<f64>,
    stage: Stage,
}

impl PrereqMatrix {
    pub fn zeros(n: usize, stage: Stage) -> Self {
        PrereqMatrix {
            n,
            values: vec![0.0; n * n],
            stage,
        }
    }

    /// Builds a matrix from rows. The diagonal is forced to zero.
    pub fn from_rows(rows: &[Vec<f64>], stage: Stage) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut m = Self::zeros(n, stage);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Ragged { rows: n, len: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(MatrixError::BadEntry(i, j));
                }
                if i != j {
                    m.values[i * n + j] = v;
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(v >= 0.0);
        self.values[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }

    pub fn to_json(&self, concepts: &ConceptSet) -> MatrixJson {
        MatrixJson {
            concepts: concepts.ids().map(str::to_string).collect(),
            stage: self.stage,
            values: self.rows(),
        }
    }
}

/// On-disk form: rows are targets, columns candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub concepts: Vec<String>,
    pub stage: Stage,
    pub values: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn into_matrix(self) -> Result<PrereqMatrix, MatrixError> {
        PrereqMatrix::from_rows(&self.values, self.stage)
    }
}

/// Explicit relations: entry `(i, j)` is the TF-IDF of concept `j` in the
/// content of concept `i`, zero when `j` does not occur there. Document
/// frequencies count over the distinct content sections; `N` is the number
/// of concepts.
pub fn explicit_relations(
    placements: &[ConceptPlacement],
    concepts: &ConceptSet,
    book: &TextbookCorpus,
) -> PrereqMatrix {
    let n = concepts.len();
    let phrases: Vec<Vec<String>> = concepts.ids().map(tokenize).collect();
    let sections: Vec<usize> = placements
        .iter()
        .filter_map(|p| p.sigma)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let docs: Vec<Vec<String>> = sections
        .iter()
        .map(|&s| tokenize(&book.sections[s].text))
        .collect();
    let table = ConceptTfidf::from_tokens(&phrases, &docs);

    let mut m = PrereqMatrix::zeros(n, Stage::Explicit);
    for p in placements {
        let Some(sigma) = p.sigma else { continue };
        let doc = sections.binary_search(&sigma).expect("content section indexed");
        let i = p.concept;
        for j in 0..n {
            if i != j && table.freq(j, doc) > 0 {
                m.set(i, j, table.score(j, doc));
            }
        }
    }
    m
}

/// One max-min composition step: `out[i][j] = max(m[i][j], max_k min(m[i][k], m[k][j]))`.
fn compose(m: &PrereqMatrix) -> PrereqMatrix {
    let n = m.n;
    let mut out = m.clone();
    for i in 0..n {
        let row_i = m.row(i);
        let out_row = &mut out.values[i * n..(i + 1) * n];
        for (k, &ik) in row_i.iter().enumerate() {
            if ik == 0.0 {
                continue;
            }
            let row_k = &m.values[k * n..(k + 1) * n];
            for (o, &kj) in out_row.iter_mut().zip(row_k) {
                let via = if ik < kj { ik } else { kj };
                if via > *o {
                    *o = via;
                }
            }
        }
    }
    out
}

/// Max-min transitive closure. Every off-diagonal entry ends up as the
/// strongest path from `i` to `j`, where a path is as strong as its weakest
/// link; existing entries never decrease. The diagonal stays zero.
pub fn implicit_closure(m: &PrereqMatrix, mode: ClosureMode) -> PrereqMatrix {
    let mut current = m.clone();
    loop {
        let next = compose(&current);
        let changed = next.values != current.values;
        current = next;
        if !changed || mode == ClosureMode::SinglePass {
            break;
        }
    }
    for i in 0..current.n {
        current.values[i * current.n + i] = 0.0;
    }
    current.stage = Stage::Closed;
    current
}

/// Keeps entry `(i, j)` only when concept `i` is ranked strictly after
/// concept `j`.
pub fn apply_ordering(m: &PrereqMatrix, ranks: &[usize]) -> PrereqMatrix {
    assert_eq!(ranks.len(), m.n, "one rank per concept");
    let mut out = m.clone();
    for i in 0..m.n {
        for j in 0..m.n {
            if ranks[i] <= ranks[j] {
                out.values[i * m.n + j] = 0.0;
            }
        }
    }
    out.stage = Stage::Ordered;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairFeatures {
    pub book_tfidf: f64,
    pub order_diff: i64,
}

/// The two book-derived pair features: the matrix entry and the rank
/// difference.
pub fn pair_features(
    i: usize,
    j: usize,
    m: &PrereqMatrix,
    ranks: &[usize],
) -> Result<PairFeatures, MatrixError> {
    for idx in [i, j] {
        if idx >= m.n || idx >= ranks.len() {
            return Err(MatrixError::OutOfRange(idx, m.n));
        }
    }
    Ok(PairFeatures {
        book_tfidf: m.get(i, j),
        order_diff: ranks[i] as i64 - ranks[j] as i64,
    })
}
