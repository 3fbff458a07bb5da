//! Input artifacts: textbook, concept list, synonyms, Wikipedia pages, link
//! graph and labeled pairs.
//!
//! A corpus directory looks like
//!
//! ```text
//! book.json        {"title": .., "sections": [{"number": "3.2.2", "title": .., "text": ..}, ..]}
//! concepts.txt     one canonical concept per line
//! synonyms.tsv     canonical <TAB> synonym            (optional)
//! wiki/<slug>.txt  one page per concept               (optional)
//! links.tsv        source <TAB> target                (optional)
//! pairs.csv        target,candidate,label             (optional)
//! ```

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textstats::tokenize;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("malformed section number {0:?}")]
    MalformedSection(String),
    #[error("section {0} appears more than once")]
    DuplicateSection(String),
    #[error("section {later} is listed after {earlier} but precedes it")]
    SectionOrder { earlier: String, later: String },
    #[error("empty concept name")]
    EmptyConcept,
    #[error("concept {0:?} listed twice")]
    DuplicateConcept(String),
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("synonym {surface:?} maps to both {first:?} and {second:?}")]
    ConflictingSynonym {
        surface: String,
        first: String,
        second: String,
    },
    #[error("pair ({0:?}, {0:?}) relates a concept to itself")]
    SelfPair(String),
    #[error("label must be 0 or 1, got {0:?}")]
    BadLabel(String),
}

pub type Result<T> = std::result::Result<T, CorpusError>;

/// Canonical form of a concept name: lowercase, whitespace collapsed.
pub fn canonical_id(name: &str) -> String {
    name.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// File name stem of a concept's Wikipedia page.
pub fn slug(id: &str) -> String {
    id.replace(' ', "_")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: String,
    pub display_name: String,
}

/// The concept vocabulary. Concepts are addressed by their index in
/// loading order everywhere downstream.
#[derive(Debug, Clone, Default)]
pub struct ConceptSet {
    concepts: Vec<Concept>,
    index: HashMap<String, usize>,
}

impl ConceptSet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut set = ConceptSet::default();
        for name in names {
            set.push(name.as_ref())?;
        }
        Ok(set)
    }

    pub fn push(&mut self, name: &str) -> Result<usize> {
        let id = canonical_id(name);
        if id.is_empty() {
            return Err(CorpusError::EmptyConcept);
        }
        if self.index.contains_key(&id) {
            return Err(CorpusError::DuplicateConcept(id));
        }
        let idx = self.concepts.len();
        self.index.insert(id.clone(), idx);
        self.concepts.push(Concept {
            id,
            display_name: name.trim().to_string(),
        });
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn get(&self, idx: usize) -> &Concept {
        &self.concepts[idx]
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.concepts[idx].id
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.concepts.iter().map(|c| c.id.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.iter()
    }

    /// Looks up a concept by any spelling that canonicalizes to its id.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(&canonical_id(name)).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.lookup(name)
            .ok_or_else(|| CorpusError::UnknownConcept(canonical_id(name)))
    }
}

/// Surface form to canonical concept id.
#[derive(Debug, Clone, Default)]
pub struct SynonymTable {
    entries: BTreeMap<String, String>,
    // (surface tokens, canonical id), longest surface first
    patterns: Vec<(Vec<String>, String)>,
}

impl SynonymTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(surface, canonical)` pairs, checking every
    /// canonical id against `concepts`. Canonical ids are added as identity
    /// entries so that a concept phrase is never split by a shorter synonym.
    pub fn build<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
        concepts: &ConceptSet,
    ) -> Result<Self> {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (surface, canonical) in pairs {
            let idx = concepts.require(canonical)?;
            let canonical = concepts.id(idx).to_string();
            let surface = canonical_id(surface);
            if surface.is_empty() {
                continue;
            }
            match entries.get(&surface) {
                Some(existing) if *existing != canonical => {
                    return Err(CorpusError::ConflictingSynonym {
                        surface,
                        first: existing.clone(),
                        second: canonical,
                    });
                }
                _ => {
                    entries.insert(surface, canonical);
                }
            }
        }
        for id in concepts.ids() {
            if let Some(existing) = entries.get(id) {
                if existing != id {
                    return Err(CorpusError::ConflictingSynonym {
                        surface: id.to_string(),
                        first: existing.clone(),
                        second: id.to_string(),
                    });
                }
            }
        }
        let mut table = SynonymTable {
            entries,
            patterns: Vec::new(),
        };
        table.rebuild_patterns(concepts.ids());
        Ok(table)
    }

    fn rebuild_patterns<'a>(&mut self, ids: impl Iterator<Item = &'a str>) {
        let mut seen = BTreeSet::new();
        let mut patterns = Vec::new();
        let identity = ids.map(|id| (id.to_string(), id.to_string()));
        let all: Vec<(String, String)> = self
            .entries
            .iter()
            .map(|(s, c)| (s.clone(), c.clone()))
            .chain(identity)
            .collect();
        for (surface, canonical) in all {
            let tokens = tokenize(&surface);
            if tokens.is_empty() || !seen.insert(tokens.clone()) {
                continue;
            }
            patterns.push((tokens, canonical));
        }
        patterns.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        self.patterns = patterns;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn canonical(&self, surface: &str) -> Option<&str> {
        self.entries.get(&canonical_id(surface)).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(s, c)| (s.as_str(), c.as_str()))
    }

    /// Lowercases `text` and rewrites every synonym occurrence to its
    /// canonical id. Matching is token-aligned, case-insensitive and
    /// longest-first; matches never overlap.
    pub fn normalize(&self, text: &str) -> String {
        let lower = text.to_lowercase();
        if self.patterns.is_empty() {
            return lower;
        }
        let spans = token_spans(&lower);
        let mut out = String::with_capacity(lower.len());
        let mut copied = 0;
        let mut t = 0;
        while t < spans.len() {
            let hit = self.patterns.iter().find(|(tokens, _)| {
                t + tokens.len() <= spans.len()
                    && tokens
                        .iter()
                        .zip(&spans[t..])
                        .all(|(p, &(s, e))| p == &lower[s..e])
            });
            match hit {
                Some((tokens, canonical)) => {
                    let start = spans[t].0;
                    let end = spans[t + tokens.len() - 1].1;
                    out.push_str(&lower[copied..start]);
                    out.push_str(canonical);
                    copied = end;
                    t += tokens.len();
                }
                None => t += 1,
            }
        }
        out.push_str(&lower[copied..]);
        out
    }
}

/// Byte spans of the alphanumeric runs of `text`.
fn token_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match (ch.is_alphanumeric(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

/// Free-function form of [`SynonymTable::normalize`].
pub fn normalize_text(text: &str, synonyms: &SynonymTable) -> String {
    synonyms.normalize(text)
}

/// Dot-separated section number such as `3.2.2`, ordered as an integer
/// tuple: `3 < 3.1 < 3.9 < 3.10 < 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectionNumber(Vec<u32>);

impl SectionNumber {
    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn chapter(&self) -> u32 {
        self.0[0]
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl FromStr for SectionNumber {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = || CorpusError::MalformedSection(s.to_string());
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(malformed());
        }
        let parts = trimmed
            .split('.')
            .map(|p| match p.parse::<u32>() {
                Ok(v) if v > 0 && !p.starts_with('+') => Ok(v),
                _ => Err(malformed()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SectionNumber(parts))
    }
}

impl fmt::Display for SectionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for SectionNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SectionNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Compares two section numbers given as strings.
pub fn compare_sections(a: &str, b: &str) -> Result<Ordering> {
    Ok(a.parse::<SectionNumber>()?.cmp(&b.parse::<SectionNumber>()?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TocSection {
    pub number: SectionNumber,
    pub title: String,
    pub text: String,
}

/// A textbook as an ordered list of numbered sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextbookCorpus {
    #[serde(default)]
    pub title: String,
    pub sections: Vec<TocSection>,
}

impl TextbookCorpus {
    pub fn new(title: impl Into<String>, sections: Vec<TocSection>) -> Result<Self> {
        let book = TextbookCorpus {
            title: title.into(),
            sections,
        };
        book.validate()?;
        Ok(book)
    }

    pub fn from_json(raw: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("book serializes")
    }

    /// Checks that section numbers are unique and listed in reading order.
    pub fn validate(&self) -> Result<()> {
        for pair in self.sections.windows(2) {
            match pair[0].number.cmp(&pair[1].number) {
                Ordering::Less => {}
                Ordering::Equal => {
                    return Err(CorpusError::DuplicateSection(pair[0].number.to_string()))
                }
                Ordering::Greater => {
                    return Err(CorpusError::SectionOrder {
                        earlier: pair[0].number.to_string(),
                        later: pair[1].number.to_string(),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.sections.len()
    }

    pub fn position(&self, number: &SectionNumber) -> Option<usize> {
        self.sections
            .binary_search_by(|s| s.number.cmp(number))
            .ok()
    }

    /// Copy of the book with titles and texts synonym-normalized.
    pub fn normalized(&self, synonyms: &SynonymTable) -> TextbookCorpus {
        TextbookCorpus {
            title: self.title.clone(),
            sections: self
                .sections
                .iter()
                .map(|s| TocSection {
                    number: s.number.clone(),
                    title: synonyms.normalize(&s.title),
                    text: synonyms.normalize(&s.text),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WikiPage {
    pub concept: usize,
    pub text: String,
}

/// Directed links between concepts' Wikipedia pages, restricted to the
/// concept set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WikiLinkGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl WikiLinkGraph {
    pub fn new(n: usize) -> Self {
        WikiLinkGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (s, t) in edges {
            g.add_edge(s, t);
        }
        g
    }

    /// Adds `source -> target`; self-links are ignored. Returns whether the
    /// edge is new.
    pub fn add_edge(&mut self, source: usize, target: usize) -> bool {
        assert!(source < self.n && target < self.n, "edge endpoint out of range");
        source != target && self.edges.insert((source, target))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edges.contains(&(source, target))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

/// `(target, candidate, label)`: label 1 means `candidate` is a
/// prerequisite of `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub target: usize,
    pub candidate: usize,
    pub label: u8,
}

impl LabeledPair {
    pub fn is_positive(&self) -> bool {
        self.label == 1
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Swap target and candidate of every labeled pair, for datasets that
    /// store `(prerequisite, dependent)`.
    pub flip_pairs: bool,
}

/// Everything loaded from a corpus directory.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub book: TextbookCorpus,
    pub concepts: ConceptSet,
    pub synonyms: SynonymTable,
    /// Raw page text per concept index.
    pub pages: Vec<Option<String>>,
    pub links: Option<WikiLinkGraph>,
    pub pairs: Vec<LabeledPair>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusCounts {
    pub sections: usize,
    pub concepts: usize,
    pub synonyms: usize,
    pub pages: usize,
    pub links: usize,
    pub pairs: usize,
    pub positive_pairs: usize,
    pub negative_pairs: usize,
}

impl Corpus {
    pub fn counts(&self) -> CorpusCounts {
        let positive = self.pairs.iter().filter(|p| p.is_positive()).count();
        CorpusCounts {
            sections: self.book.m(),
            concepts: self.concepts.len(),
            synonyms: self.synonyms.len(),
            pages: self.pages.iter().filter(|p| p.is_some()).count(),
            links: self.links.as_ref().map_or(0, WikiLinkGraph::edge_count),
            pairs: self.pairs.len(),
            positive_pairs: positive,
            negative_pairs: self.pairs.len() - positive,
        }
    }

    /// Synonym-normalized page texts, `None` where a page is missing.
    pub fn normalized_pages(&self) -> Vec<Option<String>> {
        self.pages
            .iter()
            .map(|p| p.as_ref().map(|t| self.synonyms.normalize(t)))
            .collect()
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    if path.exists() {
        read(path).map(Some)
    } else {
        Ok(None)
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Resolves a name to a concept, first directly, then through synonyms.
fn resolve_name(name: &str, concepts: &ConceptSet, synonyms: &SynonymTable) -> Option<usize> {
    concepts
        .lookup(name)
        .or_else(|| synonyms.canonical(name).and_then(|c| concepts.lookup(c)))
}

/// Raw contents of a corpus, as read from disk or supplied in memory.
/// `root` only prefixes file names in error messages.
#[derive(Debug, Clone, Default)]
pub struct CorpusSources {
    pub root: PathBuf,
    pub book: String,
    pub concepts: String,
    pub synonyms: Option<String>,
    /// Page text by concept slug.
    pub pages: BTreeMap<String, String>,
    pub links: Option<String>,
    pub pairs: Option<String>,
}

pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Corpus> {
    load_corpus_with(dir, LoadOptions::default())
}

pub fn load_corpus_with(dir: impl AsRef<Path>, options: LoadOptions) -> Result<Corpus> {
    let dir = dir.as_ref();
    let concepts = read(&dir.join("concepts.txt"))?;
    let mut pages = BTreeMap::new();
    let wiki_dir = dir.join("wiki");
    for line in concepts.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let name = slug(&canonical_id(line));
        if let Some(text) = read_optional(&wiki_dir.join(format!("{name}.txt")))? {
            pages.insert(name, text);
        }
    }
    let sources = CorpusSources {
        root: dir.to_path_buf(),
        book: read(&dir.join("book.json"))?,
        concepts,
        synonyms: read_optional(&dir.join("synonyms.tsv"))?,
        pages,
        links: read_optional(&dir.join("links.tsv"))?,
        pairs: read_optional(&dir.join("pairs.csv"))?,
    };
    build_corpus(&sources, options)
}

/// Parses and cross-checks every corpus artifact.
pub fn build_corpus(src: &CorpusSources, options: LoadOptions) -> Result<Corpus> {
    let dir = src.root.as_path();
    let mut warnings = Vec::new();

    let book_path = dir.join("book.json");
    let book: TextbookCorpus = serde_json::from_str(&src.book).map_err(|source| CorpusError::Json {
        path: book_path.clone(),
        source,
    })?;
    book.validate()?;

    let concepts = ConceptSet::new(src.concepts.lines().map(str::trim).filter(|l| !l.is_empty()))?;

    let syn_path = dir.join("synonyms.tsv");
    let mut syn_pairs = Vec::new();
    if let Some(raw) = &src.synonyms {
        for (no, line) in raw.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (canonical, surface) = line
                .split_once('\t')
                .ok_or_else(|| parse_err(&syn_path, no + 1, "expected canonical<TAB>synonym"))?;
            syn_pairs.push((surface.trim().to_string(), canonical.trim().to_string()));
        }
    }
    let synonyms = SynonymTable::build(
        syn_pairs.iter().map(|(s, c)| (s.as_str(), c.as_str())),
        &concepts,
    )?;

    let pages: Vec<Option<String>> = concepts
        .iter()
        .map(|c| src.pages.get(&slug(&c.id)).cloned())
        .collect();
    let missing_pages = pages.iter().filter(|p| p.is_none()).count();
    if missing_pages > 0 {
        warnings.push(format!("{missing_pages} concept(s) have no Wikipedia page"));
    }

    let links_path = dir.join("links.tsv");
    let links = match &src.links {
        None => None,
        Some(raw) => {
            let mut graph = WikiLinkGraph::new(concepts.len());
            let mut dropped = 0usize;
            for (no, line) in raw.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let (s, t) = line
                    .split_once('\t')
                    .ok_or_else(|| parse_err(&links_path, no + 1, "expected source<TAB>target"))?;
                match (
                    resolve_name(s, &concepts, &synonyms),
                    resolve_name(t, &concepts, &synonyms),
                ) {
                    (Some(s), Some(t)) if s != t => {
                        graph.add_edge(s, t);
                    }
                    _ => dropped += 1,
                }
            }
            if dropped > 0 {
                warnings.push(format!(
                    "{dropped} link(s) dropped: endpoint outside the concept set or self-link"
                ));
            }
            Some(graph)
        }
    };

    let pairs_path = dir.join("pairs.csv");
    let mut pairs = Vec::new();
    if let Some(raw) = &src.pairs {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(raw.as_bytes());
        let mut no_page = BTreeSet::new();
        for (no, record) in reader.records().enumerate() {
            let record = record.map_err(|e| parse_err(&pairs_path, no + 2, e.to_string()))?;
            if record.len() < 3 {
                return Err(parse_err(&pairs_path, no + 2, "expected target,candidate,label"));
            }
            let target = resolve_name(&record[0], &concepts, &synonyms)
                .ok_or_else(|| CorpusError::UnknownConcept(canonical_id(&record[0])))?;
            let candidate = resolve_name(&record[1], &concepts, &synonyms)
                .ok_or_else(|| CorpusError::UnknownConcept(canonical_id(&record[1])))?;
            if target == candidate {
                return Err(CorpusError::SelfPair(concepts.id(target).to_string()));
            }
            let label = match &record[2] {
                "0" => 0,
                "1" => 1,
                other => return Err(CorpusError::BadLabel(other.to_string())),
            };
            for c in [target, candidate] {
                if pages[c].is_none() {
                    no_page.insert(c);
                }
            }
            let (target, candidate) = if options.flip_pairs {
                (candidate, target)
            } else {
                (target, candidate)
            };
            pairs.push(LabeledPair {
                target,
                candidate,
                label,
            });
        }
        for c in no_page {
            warnings.push(format!(
                "labeled pairs reference {:?}, which has no Wikipedia page",
                concepts.id(c)
            ));
        }
    }

    for w in &warnings {
        log::warn!("{w}");
    }

    Ok(Corpus {
        book,
        concepts,
        synonyms,
        pages,
        links,
        pairs,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(&str, &str)], concepts: &[&str]) -> SynonymTable {
        let set = ConceptSet::new(concepts.iter().copied()).unwrap();
        SynonymTable::build(pairs.iter().copied(), &set).unwrap()
    }

    #[test]
    fn single_replacement() {
        let t = table(&[("speed", "velocity")], &["velocity"]);
        assert_eq!(t.normalize("Speed of the ball"), "velocity of the ball");
    }

    #[test]
    fn no_hits_only_lowercases() {
        let t = table(&[("speed", "velocity")], &["velocity"]);
        assert_eq!(t.normalize("The Ball, Rolling."), "the ball, rolling.");
    }

    #[test]
    fn longest_match_wins() {
        let t = table(
            &[("speed", "velocity"), ("angular speed", "angular velocity")],
            &["velocity", "angular velocity"],
        );
        assert_eq!(t.normalize("angular speed"), "angular velocity");
        assert_eq!(
            t.normalize("Angular Speed exceeds speed"),
            "angular velocity exceeds velocity"
        );
    }

    #[test]
    fn word_boundaries_respected() {
        let t = table(&[("arc", "arc length")], &["arc length"]);
        assert_eq!(t.normalize("architecture of an arc"), "architecture of an arc length");
    }

    #[test]
    fn conflicting_synonym_rejected() {
        let set = ConceptSet::new(["velocity", "speed limit"]).unwrap();
        let err = SynonymTable::build([("speed", "velocity"), ("speed", "speed limit")], &set);
        assert!(matches!(err, Err(CorpusError::ConflictingSynonym { .. })));
    }

    #[test]
    fn synonym_to_unknown_concept_rejected() {
        let set = ConceptSet::new(["velocity"]).unwrap();
        let err = SynonymTable::build([("speed", "rapidity")], &set);
        assert!(matches!(err, Err(CorpusError::UnknownConcept(_))));
    }

    #[test]
    fn section_comparison() {
        assert_eq!(compare_sections("3", "3.1").unwrap(), Ordering::Less);
        assert_eq!(compare_sections("3.10", "3.9").unwrap(), Ordering::Greater);
        assert_eq!(compare_sections("3.2.2", "3.2.2").unwrap(), Ordering::Equal);
    }

    #[test]
    fn malformed_sections() {
        for bad in ["", "3.", ".1", "3..1", "0", "3.0", "a.1", "-1", "+2"] {
            assert!(bad.parse::<SectionNumber>().is_err(), "{bad:?} accepted");
        }
        assert_eq!("3.2.2".parse::<SectionNumber>().unwrap().to_string(), "3.2.2");
    }

    #[test]
    fn book_order_checked() {
        let sec = |n: &str| TocSection {
            number: n.parse().unwrap(),
            title: String::new(),
            text: String::new(),
        };
        assert!(TextbookCorpus::new("b", vec![sec("1"), sec("1.1"), sec("2")]).is_ok());
        assert!(matches!(
            TextbookCorpus::new("b", vec![sec("2"), sec("1")]),
            Err(CorpusError::SectionOrder { .. })
        ));
        assert!(matches!(
            TextbookCorpus::new("b", vec![sec("1"), sec("1")]),
            Err(CorpusError::DuplicateSection(_))
        ));
    }

    #[test]
    fn duplicate_concepts_rejected() {
        assert!(matches!(
            ConceptSet::new(["Velocity", "velocity"]),
            Err(CorpusError::DuplicateConcept(_))
        ));
        assert!(matches!(ConceptSet::new(["  "]), Err(CorpusError::EmptyConcept)));
    }

    #[test]
    fn graph_ignores_self_links() {
        let mut g = WikiLinkGraph::new(2);
        assert!(!g.add_edge(1, 1));
        assert!(g.add_edge(0, 1));
        assert!(!g.add_edge(0, 1));
        assert_eq!(g.edge_count(), 1);
    }
}
