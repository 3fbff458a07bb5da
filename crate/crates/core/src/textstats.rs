//! Tokenization, phrase counting, TF-IDF scoring and cosine document
//! matching.

use std::collections::{BTreeMap, BTreeSet};

/// Lowercase alphanumeric runs of `text`.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Non-overlapping occurrences of `phrase` in `tokens`, scanning left to right.
pub fn count_phrase<S: AsRef<str>, T: AsRef<str>>(phrase: &[S], tokens: &[T]) -> usize {
    let k = phrase.len();
    if k == 0 || tokens.len() < k {
        return 0;
    }
    let mut count = 0;
    let mut i = 0;
    while i + k <= tokens.len() {
        if phrase
            .iter()
            .zip(&tokens[i..i + k])
            .all(|(p, t)| p.as_ref() == t.as_ref())
        {
            count += 1;
            i += k;
        } else {
            i += 1;
        }
    }
    count
}

/// Token offset of the first occurrence of `phrase` in `tokens`.
pub fn first_offset<S: AsRef<str>, T: AsRef<str>>(phrase: &[S], tokens: &[T]) -> Option<usize> {
    let k = phrase.len();
    if k == 0 || tokens.len() < k {
        return None;
    }
    (0..=tokens.len() - k).find(|&i| {
        phrase
            .iter()
            .zip(&tokens[i..i + k])
            .all(|(p, t)| p.as_ref() == t.as_ref())
    })
}

/// Frequency of a concept phrase in (already normalized) text.
pub fn phrase_freq(phrase: &str, text: &str) -> usize {
    count_phrase(&tokenize(phrase), &tokenize(text))
}

/// `(f / f') * ln(N / (df + 1))`, clamped at zero.
///
/// `f` is the phrase frequency in the document, `f_total` the total number
/// of concept occurrences in it, `n` the number of concepts and `df` the
/// number of documents containing the phrase.
pub fn tfidf_weight(f: usize, f_total: usize, n: usize, df: usize) -> f64 {
    if f == 0 || f_total == 0 || n == 0 {
        return 0.0;
    }
    let idf = (n as f64 / (df as f64 + 1.0)).ln();
    let w = f as f64 / f_total as f64 * idf;
    if w > 0.0 {
        w
    } else {
        0.0
    }
}

/// Concept-level TF-IDF over a fixed document collection.
///
/// Occurrence counts of every concept phrase in every document are computed
/// once; `f'` for a document is the sum of all concept counts in it.
#[derive(Debug, Clone)]
pub struct ConceptTfidf {
    n_concepts: usize,
    // counts[doc][concept]
    counts: Vec<Vec<usize>>,
    totals: Vec<usize>,
    df: Vec<usize>,
}

impl ConceptTfidf {
    pub fn new<S: AsRef<str>, D: AsRef<str>>(concepts: &[S], docs: &[D]) -> Self {
        let phrases: Vec<Vec<String>> = concepts.iter().map(|c| tokenize(c.as_ref())).collect();
        let tokenized: Vec<Vec<String>> = docs.iter().map(|d| tokenize(d.as_ref())).collect();
        Self::from_tokens(&phrases, &tokenized)
    }

    pub fn from_tokens(phrases: &[Vec<String>], docs: &[Vec<String>]) -> Self {
        let counts: Vec<Vec<usize>> = docs
            .iter()
            .map(|doc| phrases.iter().map(|p| count_phrase(p, doc)).collect())
            .collect();
        let totals = counts.iter().map(|row| row.iter().sum()).collect();
        let df = (0..phrases.len())
            .map(|c| counts.iter().filter(|row| row[c] > 0).count())
            .collect();
        ConceptTfidf {
            n_concepts: phrases.len(),
            counts,
            totals,
            df,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.counts.len()
    }

    pub fn freq(&self, concept: usize, doc: usize) -> usize {
        self.counts[doc][concept]
    }

    pub fn total(&self, doc: usize) -> usize {
        self.totals[doc]
    }

    pub fn df(&self, concept: usize) -> usize {
        self.df[concept]
    }

    pub fn score(&self, concept: usize, doc: usize) -> f64 {
        tfidf_weight(
            self.counts[doc][concept],
            self.totals[doc],
            self.n_concepts,
            self.df[concept],
        )
    }
}

/// TF-IDF of `concept` in `doc`, with `df` counted over `doc_set` and `f'`
/// and `N` taken from `concepts`.
pub fn tfidf(concept: &str, doc: &str, doc_set: &[&str], concepts: &[&str]) -> f64 {
    let phrases: Vec<Vec<String>> = concepts.iter().map(|c| tokenize(c)).collect();
    let target = tokenize(concept);
    let doc_tokens = tokenize(doc);
    let f = count_phrase(&target, &doc_tokens);
    let f_total = phrases.iter().map(|p| count_phrase(p, &doc_tokens)).sum();
    let df = doc_set
        .iter()
        .filter(|d| count_phrase(&target, &tokenize(d)) > 0)
        .count();
    tfidf_weight(f, f_total, concepts.len(), df)
}

/// Sparse term-weight vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DocVector {
    weights: BTreeMap<String, f64>,
}

impl DocVector {
    /// Builds a vector from raw weights, dropping zero and negative entries.
    pub fn from_weights(weights: impl IntoIterator<Item = (String, f64)>) -> Self {
        DocVector {
            weights: weights.into_iter().filter(|(_, w)| *w > 0.0).collect(),
        }
    }

    pub fn get(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> DocVector {
        DocVector::from_weights(self.weights.iter().map(|(k, v)| (k.clone(), v * factor)))
    }
}

/// `a·b / (|a| |b|)`, or 0 when either vector is zero.
pub fn cosine(a: &DocVector, b: &DocVector) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .weights
        .iter()
        .filter_map(|(t, w)| large.weights.get(t).map(|v| w * v))
        .sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Token-level TF-IDF vectorizer fitted on a document collection.
///
/// Weight of token `t` in document `d` is `tf(t, d) / |d| * (ln((1 + N) /
/// (1 + df(t))) + 1)` where `N` is the collection size. The smoothed idf
/// keeps every present token strictly positive, so tokens shared by all
/// documents still contribute.
#[derive(Debug, Clone, Default)]
pub struct Vectorizer {
    n_docs: usize,
    df: BTreeMap<String, usize>,
}

impl Vectorizer {
    pub fn fit<D: AsRef<str>>(docs: &[D]) -> Self {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in docs {
            let distinct: BTreeSet<String> = tokenize(doc.as_ref()).into_iter().collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
            }
        }
        Vectorizer {
            n_docs: docs.len(),
            df,
        }
    }

    pub fn idf(&self, token: &str) -> f64 {
        let df = self.df.get(token).copied().unwrap_or(0);
        ((1.0 + self.n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
    }

    pub fn transform(&self, doc: &str) -> DocVector {
        let tokens = tokenize(doc);
        if tokens.is_empty() {
            return DocVector::default();
        }
        let mut tf: BTreeMap<String, usize> = BTreeMap::new();
        for t in &tokens {
            *tf.entry(t.clone()).or_default() += 1;
        }
        let len = tokens.len() as f64;
        DocVector::from_weights(tf.into_iter().map(|(t, c)| {
            let w = c as f64 / len * self.idf(&t);
            (t, w)
        }))
    }
}

/// Vectorizes `doc` against the document frequencies of `doc_set`.
pub fn vectorize(doc: &str, doc_set: &[&str]) -> DocVector {
    Vectorizer::fit(doc_set).transform(doc)
}

/// Index of the candidate text most similar to `reference`. Candidates are
/// expected in reading order; ties keep the earliest. `None` when empty.
pub fn best_match<S: AsRef<str>>(
    candidates: &[S],
    reference: &str,
    vectorizer: &Vectorizer,
) -> Option<usize> {
    let reference = vectorizer.transform(reference);
    let mut best: Option<(usize, f64)> = None;
    for (i, text) in candidates.iter().enumerate() {
        let sim = cosine(&vectorizer.transform(text.as_ref()), &reference);
        if best.map_or(true, |(_, s)| sim > s) {
            best = Some((i, sim));
        }
    }
    best.map(|(i, _)| i)
}
