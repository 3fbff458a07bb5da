//! Browser bindings for the demo page.
//!
//! Everything is computed by plain Rust functions that return JSON strings,
//! so they can be tested natively; the `#[wasm_bindgen]` items only forward.

use std::collections::BTreeMap;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use prereqx::corpus::{build_corpus, slug, Corpus, CorpusSources, LoadOptions};
use prereqx::dag::export_dag;
use prereqx::eval::metrics::{auprc, pr_curve, PrPoint};
use prereqx::eval::{matrix_scores, pair_labels, sweep, SweepRow};
use prereqx::features::{refd, GraphStats, RefdWeights};
use prereqx::matrix::{apply_ordering, implicit_closure, ClosureMode, PrereqMatrix, Stage};
use prereqx::pipeline::{analyze, BookAnalysis, PipelineConfig};

macro_rules! sample {
    ($file:literal) => {
        include_str!(concat!("../../core/tests/fixtures/mini_physics/", $file))
    };
}

const SAMPLE_PAGES: [(&str, &str); 12] = [
    ("acceleration", sample!("wiki/acceleration.txt")),
    ("distance", sample!("wiki/distance.txt")),
    ("equations_of_motion", sample!("wiki/equations_of_motion.txt")),
    ("force", sample!("wiki/force.txt")),
    ("impulse", sample!("wiki/impulse.txt")),
    ("kinetic_energy", sample!("wiki/kinetic_energy.txt")),
    ("mass", sample!("wiki/mass.txt")),
    ("momentum", sample!("wiki/momentum.txt")),
    ("power", sample!("wiki/power.txt")),
    ("time", sample!("wiki/time.txt")),
    ("velocity", sample!("wiki/velocity.txt")),
    ("work", sample!("wiki/work.txt")),
];

/// The bundled twelve-concept mechanics corpus.
pub fn sample_sources() -> CorpusSources {
    CorpusSources {
        root: "sample".into(),
        book: sample!("book.json").into(),
        concepts: sample!("concepts.txt").into(),
        synonyms: Some(sample!("synonyms.tsv").into()),
        pages: SAMPLE_PAGES
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        links: Some(sample!("links.tsv").into()),
        pairs: Some(sample!("pairs.csv").into()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo payloads are plain data")
}

fn parse_mode(mode: &str) -> Result<ClosureMode, String> {
    match mode {
        "fixpoint" => Ok(ClosureMode::Fixpoint),
        "single-pass" => Ok(ClosureMode::SinglePass),
        other => Err(format!("unknown closure mode {other:?}")),
    }
}

pub struct Demo {
    corpus: Corpus,
    analysis: BookAnalysis,
}

#[derive(Serialize)]
struct Summary<'a> {
    title: &'a str,
    concepts: Vec<&'a str>,
    ranks: &'a [usize],
    sections: usize,
    pairs: usize,
    warnings: &'a [String],
}

#[derive(Serialize)]
struct OmegaView {
    theta: f64,
    stage: Stage,
    values: Vec<Vec<f64>>,
    edges: Vec<[usize; 2]>,
    /// Concept indices in topological order; empty when the graph has a cycle.
    order: Vec<usize>,
    cycle: Option<String>,
}

#[derive(Serialize)]
struct Curve {
    method: String,
    auprc: f64,
    points: Vec<PrPoint>,
    /// Threshold sweep, only for matrix scores.
    sweep: Vec<SweepRow>,
}

#[derive(Serialize)]
struct ClosureView {
    explicit: Vec<Vec<f64>>,
    closed: Vec<Vec<f64>>,
    ordered: Option<Vec<Vec<f64>>>,
    /// Entries raised by the closure.
    added: Vec<[usize; 2]>,
}

impl Demo {
    pub fn sample() -> Result<Demo, String> {
        Demo::from_sources(&sample_sources())
    }

    pub fn from_sources(sources: &CorpusSources) -> Result<Demo, String> {
        let corpus = build_corpus(sources, LoadOptions::default()).map_err(|e| e.to_string())?;
        let analysis = analyze(&corpus, PipelineConfig::default());
        Ok(Demo { corpus, analysis })
    }

    /// Builds a corpus from pasted text. `pages_json` maps concept names to
    /// page text; empty strings mean the optional file is absent.
    pub fn from_strings(
        book: &str,
        concepts: &str,
        synonyms: &str,
        pages_json: &str,
        links: &str,
        pairs: &str,
    ) -> Result<Demo, String> {
        let pages: BTreeMap<String, String> = if pages_json.trim().is_empty() {
            BTreeMap::new()
        } else {
            serde_json::from_str(pages_json).map_err(|e| format!("pages: {e}"))?
        };
        let opt = |s: &str| (!s.trim().is_empty()).then(|| s.to_string());
        Demo::from_sources(&CorpusSources {
            root: "input".into(),
            book: book.into(),
            concepts: concepts.into(),
            synonyms: opt(synonyms),
            pages: pages.into_iter().map(|(k, v)| (slug(&k), v)).collect(),
            links: opt(links),
            pairs: opt(pairs),
        })
    }

    pub fn summary_json(&self) -> String {
        to_json(&Summary {
            title: &self.corpus.book.title,
            concepts: self.corpus.concepts.ids().collect(),
            ranks: self.analysis.ranks(),
            sections: self.corpus.book.m(),
            pairs: self.corpus.pairs.len(),
            warnings: &self.corpus.warnings,
        })
    }

    /// Matrix and thresholded graph at `theta`, with or without the ordering
    /// filter.
    pub fn omega_json(&self, theta: f64, ordering: bool) -> String {
        let m = if ordering {
            self.analysis.ordered()
        } else {
            self.analysis.closed.clone()
        };
        let n = m.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && m.get(i, j) > theta {
                    edges.push([j, i]);
                }
            }
        }
        let (order, cycle) = match export_dag(&m, theta, &self.corpus.concepts) {
            Ok(dag) => (
                dag.topological_order
                    .iter()
                    .map(|id| self.corpus.concepts.lookup(id).expect("exported ids are known"))
                    .collect(),
                None,
            ),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        to_json(&OmegaView {
            theta,
            stage: m.stage(),
            values: m.rows(),
            edges,
            order,
            cycle,
        })
    }

    /// Precision-recall curves on the labeled pairs for each scoring method.
    pub fn curves_json(&self) -> Result<String, String> {
        let pairs = &self.corpus.pairs;
        if pairs.is_empty() {
            return Err("no labeled pairs".into());
        }
        let labels = pair_labels(pairs);
        let mut methods: Vec<(&str, Vec<f64>, bool)> = vec![
            ("proposed", matrix_scores(&self.analysis.ordered(), pairs), true),
            ("proposed-no-ordering", matrix_scores(&self.analysis.closed, pairs), true),
        ];
        if let Some(graph) = &self.corpus.links {
            let stats = GraphStats::new(graph);
            let tfidf = RefdWeights::tfidf(&self.corpus.concepts, &self.analysis.pages);
            for (name, w) in [("refd-equal", &RefdWeights::Equal), ("refd-tfidf", &tfidf)] {
                let scores = pairs.iter().map(|p| refd(p.target, p.candidate, &stats, w)).collect();
                methods.push((name, scores, false));
            }
        }
        let curves = methods
            .into_iter()
            .map(|(name, scores, matrix)| {
                Ok(Curve {
                    method: name.to_string(),
                    auprc: auprc(&scores, &labels).map_err(|e| e.to_string())?,
                    points: pr_curve(&scores, &labels).map_err(|e| e.to_string())?,
                    sweep: if matrix {
                        sweep(&scores, &labels).map_err(|e| e.to_string())?
                    } else {
                        Vec::new()
                    },
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(to_json(&curves))
    }
}

/// Closes a user-supplied explicit matrix. `ranks_json` is either empty or
/// a list of book ranks, one per concept, which enables the ordering filter.
pub fn closure_json(matrix_json: &str, mode: &str, ranks_json: &str) -> Result<String, String> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(matrix_json).map_err(|e| format!("matrix: {e}"))?;
    let explicit = PrereqMatrix::from_rows(&rows, Stage::Explicit).map_err(|e| e.to_string())?;
    let closed = implicit_closure(&explicit, parse_mode(mode)?);
    let ordered = if ranks_json.trim().is_empty() {
        None
    } else {
        let ranks: Vec<usize> = serde_json::from_str(ranks_json).map_err(|e| format!("ranks: {e}"))?;
        if ranks.len() != explicit.n() {
            return Err(format!("{} ranks for {} concepts", ranks.len(), explicit.n()));
        }
        Some(apply_ordering(&closed, &ranks).rows())
    };
    let n = explicit.n();
    let added = (0..n)
        .flat_map(|i| (0..n).map(move |j| [i, j]))
        .filter(|&[i, j]| closed.get(i, j) > explicit.get(i, j))
        .collect();
    Ok(to_json(&ClosureView {
        explicit: explicit.rows(),
        closed: closed.rows(),
        ordered,
        added,
    }))
}

#[wasm_bindgen(js_name = Demo)]
pub struct DemoHandle(Demo);

#[wasm_bindgen(js_class = Demo)]
impl DemoHandle {
    #[wasm_bindgen(js_name = sample)]
    pub fn sample() -> Result<DemoHandle, JsValue> {
        Demo::sample().map(DemoHandle).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = fromStrings)]
    pub fn from_strings(
        book: &str,
        concepts: &str,
        synonyms: &str,
        pages_json: &str,
        links: &str,
        pairs: &str,
    ) -> Result<DemoHandle, JsValue> {
        Demo::from_strings(book, concepts, synonyms, pages_json, links, pairs)
            .map(DemoHandle)
            .map_err(|e| JsValue::from_str(&e))
    }

    pub fn summary(&self) -> String {
        self.0.summary_json()
    }

    pub fn omega(&self, theta: f64, ordering: bool) -> String {
        self.0.omega_json(theta, ordering)
    }

    pub fn curves(&self) -> Result<String, JsValue> {
        self.0.curves_json().map_err(|e| JsValue::from_str(&e))
    }
}

#[wasm_bindgen]
pub fn closure(matrix_json: &str, mode: &str, ranks_json: &str) -> Result<String, JsValue> {
    closure_json(matrix_json, mode, ranks_json).map_err(|e| JsValue::from_str(&e))
}
