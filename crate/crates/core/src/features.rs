//! Pair features from Wikipedia pages and the concept link graph, the RefD
//! score, and the tabular feature format shared with the classifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ConceptSet, LabeledPair, WikiLinkGraph};
use crate::matrix::{pair_features, PrereqMatrix};
use crate::textstats::{cosine, count_phrase, tokenize, ConceptTfidf, DocVector, Vectorizer};

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const CONVERGENCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 10_000;
/// NGD when two concepts share no in-links.
pub const NGD_CAP: f64 = 1e6;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("features.csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("features.csv line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("embeddings line {line}: {message}")]
    Embeddings { line: usize, message: String },
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// PageRank with uniform teleport; dangling nodes spread their mass evenly.
pub fn pagerank(graph: &WikiLinkGraph, damping: f64, tol: f64) -> Vec<f64> {
    let n = graph.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut out_deg = vec![0usize; n];
    for (s, _) in graph.edges() {
        out_deg[s] += 1;
    }
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    for _ in 0..MAX_ITERATIONS {
        let dangling: f64 = (0..n).filter(|&v| out_deg[v] == 0).map(|v| rank[v]).sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        let mut next = vec![base; n];
        for (s, t) in graph.edges() {
            next[t] += damping * rank[s] / out_deg[s] as f64;
        }
        let delta: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if delta < tol {
            break;
        }
    }
    rank
}

fn normalize_l2(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    } else if !v.is_empty() {
        let u = 1.0 / (v.len() as f64).sqrt();
        v.iter_mut().for_each(|x| *x = u);
    }
}

/// HITS hub and authority scores, each with unit L2 norm.
pub fn hits(graph: &WikiLinkGraph, tol: f64) -> (Vec<f64>, Vec<f64>) {
    let n = graph.node_count();
    let mut hub = vec![1.0; n];
    let mut auth = vec![1.0; n];
    normalize_l2(&mut hub);
    normalize_l2(&mut auth);
    for _ in 0..MAX_ITERATIONS {
        let mut next_auth = vec![0.0; n];
        for (s, t) in graph.edges() {
            next_auth[t] += hub[s];
        }
        normalize_l2(&mut next_auth);
        let mut next_hub = vec![0.0; n];
        for (s, t) in graph.edges() {
            next_hub[s] += next_auth[t];
        }
        normalize_l2(&mut next_hub);
        let delta: f64 = next_hub
            .iter()
            .zip(&hub)
            .chain(next_auth.iter().zip(&auth))
            .map(|(a, b)| (a - b).abs())
            .sum();
        hub = next_hub;
        auth = next_auth;
        if delta < tol {
            break;
        }
    }
    (hub, auth)
}

/// Neighborhoods and link-analysis scores computed once per graph.
#[derive(Debug, Clone)]
pub struct GraphStats {
    pub out_links: Vec<BTreeSet<usize>>,
    pub in_links: Vec<BTreeSet<usize>>,
    pub pagerank: Vec<f64>,
    pub hub: Vec<f64>,
    pub authority: Vec<f64>,
}

impl GraphStats {
    pub fn new(graph: &WikiLinkGraph) -> Self {
        let n = graph.node_count();
        let mut out_links = vec![BTreeSet::new(); n];
        let mut in_links = vec![BTreeSet::new(); n];
        for (s, t) in graph.edges() {
            out_links[s].insert(t);
            in_links[t].insert(s);
        }
        let (hub, authority) = hits(graph, CONVERGENCE);
        GraphStats {
            out_links,
            in_links,
            pagerank: pagerank(graph, PAGERANK_DAMPING, CONVERGENCE),
            hub,
            authority,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out_links.len()
    }

    fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.out_links[v].union(&self.in_links[v]).copied().collect()
    }

    /// Nodes adjacent (in either direction) to both `a` and `b`.
    pub fn common_neighbors(&self, a: usize, b: usize) -> usize {
        let na = self.neighbors(a);
        self.neighbors(b)
            .iter()
            .filter(|&&v| v != a && v != b && na.contains(&v))
            .count()
    }

    fn in_link_overlap(&self, a: usize, b: usize) -> (usize, usize, usize) {
        let (ia, ib) = (&self.in_links[a], &self.in_links[b]);
        (ia.len(), ib.len(), ia.intersection(ib).count())
    }

    /// Normalized Google Distance over in-link sets; `NGD_CAP` when the sets
    /// do not intersect.
    pub fn ngd(&self, a: usize, b: usize) -> f64 {
        let (na, nb, both) = self.in_link_overlap(a, b);
        if both == 0 {
            return NGD_CAP;
        }
        let w = self.node_count() as f64;
        let num = (na.max(nb) as f64).ln() - (both as f64).ln();
        let den = w.ln() - (na.min(nb) as f64).ln();
        if num <= 0.0 {
            0.0
        } else if den <= 0.0 {
            NGD_CAP
        } else {
            num / den
        }
    }

    /// Pointwise mutual information of in-link sets; 0 when they do not
    /// intersect.
    pub fn pmi(&self, a: usize, b: usize) -> f64 {
        let (na, nb, both) = self.in_link_overlap(a, b);
        if both == 0 {
            return 0.0;
        }
        (both as f64 * self.node_count() as f64 / (na as f64 * nb as f64)).ln()
    }

    /// Links between the pair over the total out-links of both.
    pub fn link_proportion(&self, a: usize, b: usize) -> f64 {
        let between = self.out_links[a].contains(&b) as usize + self.out_links[b].contains(&a) as usize;
        let total = self.out_links[a].len() + self.out_links[b].len();
        if total == 0 {
            0.0
        } else {
            between as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefdWeighting {
    Equal,
    Tfidf,
}

/// Weights `w(c, a)` of concept `c` for concept `a`.
#[derive(Debug, Clone)]
pub enum RefdWeights {
    /// `w(c, a) = 1` iff `a` links to `c`.
    Equal,
    /// `w(c, a)` = TF-IDF of `c` in `a`'s page.
    Tfidf(ConceptTfidf),
}

impl RefdWeights {
    /// TF-IDF weights over the (normalized) pages; missing pages weigh
    /// nothing.
    pub fn tfidf(concepts: &ConceptSet, pages: &[Option<String>]) -> Self {
        let ids: Vec<&str> = concepts.ids().collect();
        let docs: Vec<&str> = pages.iter().map(|p| p.as_deref().unwrap_or("")).collect();
        RefdWeights::Tfidf(ConceptTfidf::new(&ids, &docs))
    }

    fn weight(&self, c: usize, a: usize, stats: &GraphStats) -> f64 {
        match self {
            RefdWeights::Equal => stats.out_links[a].contains(&c) as u8 as f64,
            RefdWeights::Tfidf(table) => table.score(c, a),
        }
    }
}

fn refd_half(a: usize, b: usize, stats: &GraphStats, weights: &RefdWeights) -> f64 {
    let n = stats.node_count();
    let (mut num, mut den) = (0.0, 0.0);
    for c in 0..n {
        let w = weights.weight(c, a, stats);
        if w == 0.0 {
            continue;
        }
        den += w;
        if stats.out_links[c].contains(&b) {
            num += w;
        }
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Reference distance: how much `a`'s related concepts refer to `b`, minus
/// the reverse. Positive values suggest `b` is a prerequisite of `a`.
pub fn refd(a: usize, b: usize, stats: &GraphStats, weights: &RefdWeights) -> f64 {
    refd_half(a, b, stats, weights) - refd_half(b, a, stats, weights)
}

/// Word vectors in the common text format: `word f1 f2 ...` per line, with
/// an optional `count dim` header.
#[derive(Debug, Clone, Default)]
pub struct Embeddings {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl Embeddings {
    pub fn parse(reader: impl Read) -> Result<Self, FeatureError> {
        let mut raw = String::new();
        let mut reader = reader;
        reader.read_to_string(&mut raw)?;
        let mut emb = Embeddings::default();
        for (no, line) in raw.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let values: Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
            let values = values.map_err(|e| FeatureError::Embeddings {
                line: no + 1,
                message: e.to_string(),
            })?;
            if no == 0 && values.len() == 1 && word.parse::<usize>().is_ok() {
                continue;
            }
            if values.is_empty() {
                return Err(FeatureError::Embeddings {
                    line: no + 1,
                    message: "no vector components".into(),
                });
            }
            if emb.dim == 0 {
                emb.dim = values.len();
            } else if values.len() != emb.dim {
                return Err(FeatureError::Embeddings {
                    line: no + 1,
                    message: format!("expected {} components, got {}", emb.dim, values.len()),
                });
            }
            emb.vectors.insert(word.to_lowercase(), values);
        }
        Ok(emb)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Mean vector of the known tokens, `None` if none are known.
    pub fn mean(&self, tokens: &[String]) -> Option<Vec<f64>> {
        let mut acc = vec![0.0; self.dim];
        let mut hits = 0;
        for v in tokens.iter().filter_map(|t| self.vectors.get(t)) {
            acc.iter_mut().zip(v).for_each(|(a, x)| *a += x);
            hits += 1;
        }
        (hits > 0).then(|| acc.into_iter().map(|a| a / hits as f64).collect())
    }
}

fn dense_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Jaccard similarity of two token sets; 1 for two empty sets.
pub fn jaccard(a: &[String], b: &[String]) -> f64 {
    let sa: BTreeSet<&String> = a.iter().collect();
    let sb: BTreeSet<&String> = b.iter().collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 1.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

/// Tokens of the text up to and including the first period.
pub fn first_sentence(text: &str) -> Vec<String> {
    match text.find('.') {
        Some(end) => tokenize(&text[..end]),
        None => tokenize(text),
    }
}

pub const GRAPH_FEATURES: [&str; 17] = [
    "in_degree_a",
    "out_degree_a",
    "in_degree_b",
    "out_degree_b",
    "common_neighbors",
    "links_ab",
    "links_ba",
    "link_proportion",
    "ngd",
    "pmi",
    "refd_equal",
    "pagerank_a",
    "pagerank_b",
    "hub_a",
    "hub_b",
    "authority_a",
    "authority_b",
];

pub const TEXT_FEATURES: [&str; 10] = [
    "first_sentence_ab",
    "first_sentence_ba",
    "in_title_ab",
    "in_title_ba",
    "title_jaccard",
    "length_a",
    "length_b",
    "mention_ab",
    "mention_ba",
    "tfidf_similarity",
];

pub const WORD2VEC_FEATURE: &str = "word2vec_similarity";

pub const BOOK_FEATURES: [&str; 2] = ["book_tfidf", "order_diff"];

/// Graph features of the ordered pair `(a, b)`, `a` the target and `b` the
/// candidate prerequisite.
pub fn graph_features(a: usize, b: usize, stats: &GraphStats) -> Vec<f64> {
    vec![
        stats.in_links[a].len() as f64,
        stats.out_links[a].len() as f64,
        stats.in_links[b].len() as f64,
        stats.out_links[b].len() as f64,
        stats.common_neighbors(a, b) as f64,
        stats.out_links[a].contains(&b) as u8 as f64,
        stats.out_links[b].contains(&a) as u8 as f64,
        stats.link_proportion(a, b),
        stats.ngd(a, b),
        stats.pmi(a, b),
        refd(a, b, stats, &RefdWeights::Equal),
        stats.pagerank[a],
        stats.pagerank[b],
        stats.hub[a],
        stats.hub[b],
        stats.authority[a],
        stats.authority[b],
    ]
}

/// Per-concept page data shared by all pairs.
#[derive(Debug, Clone)]
pub struct PageIndex {
    titles: Vec<Vec<String>>,
    tokens: Vec<Option<Vec<String>>>,
    first: Vec<Vec<String>>,
    vectors: Vec<DocVector>,
    title_vectors: Vec<Option<Vec<f64>>>,
    with_embeddings: bool,
}

impl PageIndex {
    /// `pages` must already be synonym-normalized.
    pub fn new(concepts: &ConceptSet, pages: &[Option<String>], embeddings: Option<&Embeddings>) -> Self {
        let present: Vec<&str> = pages.iter().filter_map(|p| p.as_deref()).collect();
        let vectorizer = Vectorizer::fit(&present);
        let titles: Vec<Vec<String>> = concepts.ids().map(tokenize).collect();
        PageIndex {
            title_vectors: titles
                .iter()
                .map(|t| embeddings.and_then(|e| e.mean(t)))
                .collect(),
            titles,
            tokens: pages.iter().map(|p| p.as_deref().map(tokenize)).collect(),
            first: pages
                .iter()
                .map(|p| p.as_deref().map(first_sentence).unwrap_or_default())
                .collect(),
            vectors: pages
                .iter()
                .map(|p| p.as_deref().map(|t| vectorizer.transform(t)).unwrap_or_default())
                .collect(),
            with_embeddings: embeddings.is_some(),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut names = TEXT_FEATURES.to_vec();
        if self.with_embeddings {
            names.push(WORD2VEC_FEATURE);
        }
        names
    }

    pub fn has_page(&self, c: usize) -> bool {
        self.tokens[c].is_some()
    }

    /// Text features of `(a, b)`; all zeros, flagged, when a page is
    /// missing.
    pub fn text_features(&self, a: usize, b: usize) -> (Vec<f64>, bool) {
        let width = self.names().len();
        let (Some(ta), Some(tb)) = (&self.tokens[a], &self.tokens[b]) else {
            return (vec![0.0; width], true);
        };
        let (name_a, name_b) = (&self.titles[a], &self.titles[b]);
        let contains = |hay: &[String], needle: &[String]| (count_phrase(needle, hay) > 0) as u8 as f64;
        let mut row = vec![
            contains(&self.first[a], name_b),
            contains(&self.first[b], name_a),
            contains(name_a, name_b),
            contains(name_b, name_a),
            jaccard(name_a, name_b),
            (1.0 + ta.len() as f64).ln(),
            (1.0 + tb.len() as f64).ln(),
            count_phrase(name_b, ta) as f64,
            count_phrase(name_a, tb) as f64,
            cosine(&self.vectors[a], &self.vectors[b]),
        ];
        if self.with_embeddings {
            row.push(match (&self.title_vectors[a], &self.title_vectors[b]) {
                (Some(va), Some(vb)) => dense_cosine(va, vb),
                _ => 0.0,
            });
        }
        (row, false)
    }
}

/// Named feature columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureSet {
    /// Graph and text features from Wikipedia.
    Gtc,
    /// Graph, text and the two book features.
    Proposed,
    /// Only the book features.
    BookOnly,
}

impl FeatureSet {
    pub fn name(self) -> &'static str {
        match self {
            FeatureSet::Gtc => "gtc",
            FeatureSet::Proposed => "proposed",
            FeatureSet::BookOnly => "book-only",
        }
    }

    pub fn includes(self, feature: &str) -> bool {
        let book = BOOK_FEATURES.contains(&feature);
        match self {
            FeatureSet::Gtc => !book,
            FeatureSet::Proposed => true,
            FeatureSet::BookOnly => book,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub target: String,
    pub candidate: String,
    pub label: Option<u8>,
    pub values: Vec<f64>,
    /// Set when a Wikipedia page was missing and text features are zeros.
    pub missing_page: bool,
}

/// Rectangular feature data with one shared schema.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn select(&self, set: FeatureSet) -> FeatureTable {
        let keep: Vec<usize> = (0..self.names.len())
            .filter(|&i| set.includes(&self.names[i]))
            .collect();
        FeatureTable {
            names: keep.iter().map(|&i| self.names[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| FeatureRow {
                    values: keep.iter().map(|&i| r.values[i]).collect(),
                    ..r.clone()
                })
                .collect(),
        }
    }

    pub fn labels(&self) -> Option<Vec<u8>> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> FeatureTable {
        FeatureTable {
            names: self.names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), FeatureError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["target".to_string(), "candidate".into(), "label".into()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.target.clone(),
                r.candidate.clone(),
                r.label.map(|l| l.to_string()).unwrap_or_default(),
            ];
            rec.extend(r.values.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(input: impl Read) -> Result<FeatureTable, FeatureError> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 3 || &header[0] != "target" || &header[1] != "candidate" || &header[2] != "label" {
            return Err(FeatureError::Format {
                line: 1,
                message: "header must start with target,candidate,label".into(),
            });
        }
        let names: Vec<String> = header.iter().skip(3).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (no, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = no + 2;
            let bad = |message: String| FeatureError::Format { line, message };
            let label = match &rec[2] {
                "" => None,
                "0" => Some(0),
                "1" => Some(1),
                other => return Err(bad(format!("bad label {other:?}"))),
            };
            let values = rec
                .iter()
                .skip(3)
                .map(|v| v.parse::<f64>().map_err(|e| bad(format!("{v:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != names.len() {
                return Err(bad(format!("expected {} values, got {}", names.len(), values.len())));
            }
            rows.push(FeatureRow {
                target: rec[0].to_string(),
                candidate: rec[1].to_string(),
                label,
                values,
                missing_page: false,
            });
        }
        Ok(FeatureTable { names, rows })
    }
}

/// Inputs to feature extraction over a set of labeled pairs.
pub struct FeatureSources<'a> {
    pub concepts: &'a ConceptSet,
    pub graph: &'a WikiLinkGraph,
    /// Normalized page text per concept.
    pub pages: &'a [Option<String>],
    pub embeddings: Option<&'a Embeddings>,
    /// Ordered prerequisite matrix and ranks for the book features.
    pub book: Option<(&'a PrereqMatrix, &'a [usize])>,
}

/// Extracts every available feature for every pair. Column order: graph,
/// text, then book features when a matrix is supplied.
pub fn extract(sources: &FeatureSources<'_>, pairs: &[LabeledPair]) -> FeatureTable {
    let stats = GraphStats::new(sources.graph);
    let pages = PageIndex::new(sources.concepts, sources.pages, sources.embeddings);
    let mut names: Vec<String> = GRAPH_FEATURES.iter().map(|s| s.to_string()).collect();
    names.extend(pages.names().into_iter().map(str::to_string));
    if sources.book.is_some() {
        names.extend(BOOK_FEATURES.iter().map(|s| s.to_string()));
    }
    let rows = pairs
        .iter()
        .map(|p| {
            let (a, b) = (p.target, p.candidate);
            let mut values = graph_features(a, b, &stats);
            let (text, missing_page) = pages.text_features(a, b);
            values.extend(text);
            if let Some((m, ranks)) = sources.book {
                let f = pair_features(a, b, m, ranks).expect("pair indices come from the concept set");
                values.push(f.book_tfidf);
                values.push(f.order_diff as f64);
            }
            FeatureRow {
                target: sources.concepts.id(a).to_string(),
                candidate: sources.concepts.id(b).to_string(),
                label: Some(p.label),
                values,
                missing_page,
            }
        })
        .collect();
    FeatureTable { names, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn refd_examples() {
        let empty = GraphStats::new(&WikiLinkGraph::new(3));
        assert_eq!(refd(0, 1, &empty, &RefdWeights::Equal), 0.0);
        // a=0, b=1, c1=2: a -> c1, c1 -> b
        let g = WikiLinkGraph::from_edges(3, [(0, 2), (2, 1)]);
        let s = GraphStats::new(&g);
        assert_eq!(refd(0, 1, &s, &RefdWeights::Equal), 1.0);
        assert_eq!(refd(1, 0, &s, &RefdWeights::Equal), -1.0);
        let sym = GraphStats::new(&WikiLinkGraph::from_edges(2, [(0, 1), (1, 0)]));
        assert_eq!(refd(0, 1, &sym, &RefdWeights::Equal), 0.0);
    }

    #[test]
    fn isolated_nodes() {
        let s = GraphStats::new(&WikiLinkGraph::new(2));
        let f = graph_features(0, 1, &s);
        assert_eq!(&f[..5], &[0.0; 5]);
        assert_eq!(s.pmi(0, 1), 0.0);
        assert_eq!(s.ngd(0, 1), NGD_CAP);
    }

    #[test]
    fn two_cycle_pagerank() {
        let g = WikiLinkGraph::from_edges(2, [(0, 1), (1, 0)]);
        let pr = pagerank(&g, 0.85, 1e-8);
        assert_abs_diff_eq!(pr[0], 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(pr[1], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard(&toks("right triangle"), &toks("right triangle")), 1.0);
        assert_abs_diff_eq!(jaccard(&toks("right triangle"), &toks("triangle area")), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn first_sentence_stops_at_period() {
        assert_eq!(first_sentence("A b. C d."), ["a", "b"]);
        assert_eq!(first_sentence("no period"), ["no", "period"]);
    }

    #[test]
    fn embeddings_parse() {
        let e = Embeddings::parse("2 3\nspeed 1 0 0\nvelocity 0.5 0.5 0\n".as_bytes()).unwrap();
        assert_eq!(e.dim(), 3);
        assert_eq!(e.mean(&toks("speed velocity")).unwrap(), vec![0.75, 0.25, 0.0]);
        assert!(e.mean(&toks("unknown")).is_none());
        assert!(Embeddings::parse("a 1 2\nb 1\n".as_bytes()).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = FeatureTable {
            names: vec!["x".into(), "book_tfidf".into()],
            rows: vec![FeatureRow {
                target: "a".into(),
                candidate: "b".into(),
                label: Some(1),
                values: vec![0.25, 0.1386],
                missing_page: false,
            }],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("target,candidate,label,x,book_tfidf\n"));
        assert_eq!(FeatureTable::read_csv(buf.as_slice()).unwrap(), t);
        assert_eq!(t.select(FeatureSet::Gtc).names, ["x"]);
        assert_eq!(t.select(FeatureSet::BookOnly).names, ["book_tfidf"]);
    }
}
