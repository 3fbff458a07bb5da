//! Report assembly for the evaluation commands.

use anyhow::{bail, Result};
use serde::Serialize;

use prereqx::classify::{ModelKind, TrainConfig};
use prereqx::corpus::{Corpus, CorpusCounts};
use prereqx::eval::metrics::{prf, PrPoint};
use prereqx::eval::published::{self, Delta, Domain, StatMethod};
use prereqx::eval::{self, run_supervised, SupervisedResult, ThresholdReport};
use prereqx::features::{refd, FeatureSet, GraphStats, RefdWeights};
use prereqx::pipeline::{analyze, BookAnalysis};

use crate::{feature_table, Global};

/// Features from the published GTC set that this tool does not compute.
const OMITTED_FEATURES: [&str; 3] = ["lda_entropy", "lda_cross_entropy", "noun_phrases"];

#[derive(Serialize)]
pub struct Placement {
    concept: String,
    rho: Option<String>,
    basic: bool,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<String>,
}

pub fn placements(corpus: &Corpus, a: &BookAnalysis, with_content: bool) -> Vec<Placement> {
    a.resolution
        .placements
        .iter()
        .map(|p| Placement {
            concept: corpus.concepts.id(p.concept).to_string(),
            rho: p.rho_number(&a.book).map(ToString::to_string),
            basic: p.basic,
            rank: a.resolution.ranks[p.concept],
            sigma: with_content.then(|| p.sigma_text(&a.book).to_string()),
        })
        .collect()
}

#[derive(Serialize)]
pub struct ConfigEcho {
    corpus: String,
    seed: u64,
    k_folds: usize,
    ordering: bool,
    closure: &'static str,
    theta: Option<f64>,
    flip_pairs: bool,
    domain: Option<String>,
}

fn echo(g: &Global) -> ConfigEcho {
    ConfigEcho {
        corpus: g.corpus.display().to_string(),
        seed: g.seed,
        k_folds: g.k_folds,
        ordering: !g.no_ordering,
        closure: if g.single_pass_closure { "single-pass" } else { "fixpoint" },
        theta: g.theta,
        flip_pairs: g.flip_pairs,
        domain: g.domain.clone(),
    }
}

fn domain(g: &Global) -> Result<Option<Domain>> {
    match &g.domain {
        None => Ok(None),
        Some(d) => match Domain::parse(d) {
            Some(d) => Ok(Some(d)),
            None => bail!("unknown --domain {d:?}; expected geometry, physics or precalculus"),
        },
    }
}

#[derive(Serialize)]
pub struct FixedTheta {
    theta: f64,
    precision: f64,
    recall: f64,
    f1: f64,
}

#[derive(Serialize)]
pub struct StatDelta {
    method: String,
    #[serde(flatten)]
    delta: Delta,
}

#[derive(Serialize)]
pub struct PublishedComparison {
    domain: Domain,
    methods: Vec<StatDelta>,
    published_theta: f64,
    measured_theta: f64,
}

#[derive(Serialize)]
pub struct StatReport {
    command: &'static str,
    config: ConfigEcho,
    dataset: CorpusCounts,
    warnings: Vec<String>,
    notes: Vec<String>,
    /// Method matching the configured pipeline.
    headline: String,
    methods: Vec<ThresholdReport>,
    fixed_theta: Option<FixedTheta>,
    published: Option<PublishedComparison>,
}

pub struct StatOutput {
    pub report: StatReport,
    /// Output file name and curve, headline first.
    pub curves: Vec<(String, Vec<PrPoint>)>,
}

const PROPOSED: &str = "proposed";
const NO_ORDERING: &str = "proposed-no-ordering";
const REFD_EQUAL: &str = "refd-equal";
const REFD_TFIDF: &str = "refd-tfidf";

pub fn statistical(g: &Global, corpus: &Corpus, theta: Option<f64>) -> Result<StatOutput> {
    let domain = domain(g)?;
    if corpus.pairs.is_empty() {
        bail!("eval-stat needs labeled pairs in pairs.csv");
    }
    let cv = g.cv();
    let a = analyze(corpus, g.pipeline());
    let labels = eval::pair_labels(&corpus.pairs);
    let ordered = a.ordered();
    let mut methods = vec![
        eval::run_statistical(PROPOSED, &ordered, &corpus.pairs, cv)?,
        eval::run_statistical(NO_ORDERING, &a.closed, &corpus.pairs, cv)?,
    ];
    let headline = if g.no_ordering { NO_ORDERING } else { PROPOSED };
    let mut notes = vec![
        "auprc pools every pair's score; auprc_fold_mean averages per-fold areas".to_string(),
        "precision, recall and f1 average the test folds, each with a threshold tuned on its training folds".to_string(),
    ];
    match &corpus.links {
        Some(graph) => {
            let stats = GraphStats::new(graph);
            let tfidf = RefdWeights::tfidf(&corpus.concepts, &a.pages);
            for (name, weights) in [(REFD_EQUAL, &RefdWeights::Equal), (REFD_TFIDF, &tfidf)] {
                let scores: Vec<f64> = corpus
                    .pairs
                    .iter()
                    .map(|p| refd(p.target, p.candidate, &stats, weights))
                    .collect();
                methods.push(eval::evaluate_threshold(name, &scores, &labels, &eval::refd_grid(), cv)?);
            }
        }
        None => notes.push("no links.tsv: link-based baselines skipped".into()),
    }
    // headline first
    methods.sort_by_key(|m| m.method != headline);

    let fixed_theta = match theta {
        None => None,
        Some(t) => {
            let omega = if g.no_ordering { &a.closed } else { &ordered };
            let preds: Vec<u8> = eval::matrix_scores(omega, &corpus.pairs)
                .into_iter()
                .map(|s| (s > t) as u8)
                .collect();
            let m = prf(&preds, &labels)?;
            Some(FixedTheta {
                theta: t,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
            })
        }
    };

    let published = domain.map(|d| {
        let find = |name: &str| methods.iter().find(|m| m.method == name);
        let mut rows = Vec::new();
        for (name, which) in [
            (PROPOSED, StatMethod::Proposed),
            (REFD_EQUAL, StatMethod::RefdEqual),
            (REFD_TFIDF, StatMethod::RefdTfidf),
        ] {
            if let Some(m) = find(name) {
                rows.push(StatDelta {
                    method: name.to_string(),
                    delta: published::delta(
                        published::statistical(d, which),
                        m.precision,
                        m.recall,
                        m.f1,
                        Some(m.auprc),
                    ),
                });
            }
        }
        PublishedComparison {
            domain: d,
            methods: rows,
            published_theta: published::theta(d),
            measured_theta: find(PROPOSED).map_or(f64::NAN, |m| m.threshold_mean),
        }
    });

    let curves = methods
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let file = if i == 0 {
                "prcurve.csv".to_string()
            } else {
                format!("prcurve-{}.csv", m.method)
            };
            (file, m.pr_curve.clone())
        })
        .collect();

    Ok(StatOutput {
        report: StatReport {
            command: "eval-stat",
            config: echo(g),
            dataset: corpus.counts(),
            warnings: corpus.warnings.clone(),
            notes,
            headline: headline.to_string(),
            methods,
            fixed_theta,
            published,
        },
        curves,
    })
}

pub fn print_statistical(r: &StatReport) {
    eprintln!("{:<22} {:>9} {:>9} {:>9} {:>9} {:>7}", "method", "precision", "recall", "f1", "auprc", "theta");
    for m in &r.methods {
        eprintln!(
            "{:<22} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>7.3}",
            m.method, m.precision, m.recall, m.f1, m.auprc, m.threshold_mean
        );
    }
    if let Some(p) = &r.published {
        eprintln!("against published {:?} figures (percentage points; auprc as fraction):", p.domain);
        for d in &p.methods {
            eprintln!(
                "{:<22} dP {:+7.2} dR {:+7.2} dF1 {:+7.2} dAUPRC {:+.3}",
                d.method,
                d.delta.d_precision,
                d.delta.d_recall,
                d.delta.d_f1,
                d.delta.d_auprc.unwrap_or(f64::NAN)
            );
        }
        eprintln!("theta: measured {:.3}, published {:.3}", p.measured_theta, p.published_theta);
    }
}

#[derive(Serialize)]
pub struct SupervisedDelta {
    feature_set: FeatureSet,
    model: ModelKind,
    #[serde(flatten)]
    delta: Delta,
}

#[derive(Serialize)]
pub struct SupervisedReport {
    command: &'static str,
    config: ConfigEcho,
    train: TrainConfig,
    dataset: CorpusCounts,
    warnings: Vec<String>,
    notes: Vec<String>,
    features: Vec<String>,
    results: Vec<SupervisedResult>,
    published: Option<Vec<SupervisedDelta>>,
}

pub fn supervised(g: &Global, corpus: &Corpus, cfg: &TrainConfig) -> Result<SupervisedReport> {
    let domain = domain(g)?;
    if corpus.pairs.is_empty() {
        bail!("eval-supervised needs labeled pairs in pairs.csv");
    }
    let a = analyze(corpus, g.pipeline());
    let table = feature_table(g, corpus, &a)?;
    let models: Vec<ModelKind> = g.model.map_or(ModelKind::ALL.to_vec(), |m| vec![m]);
    let sets: Vec<FeatureSet> = g
        .features
        .map_or(vec![FeatureSet::Gtc, FeatureSet::Proposed], |f| vec![f.into()]);
    let results = run_supervised(&table, &models, &sets, g.cv(), cfg)?;
    let mut notes = vec![format!(
        "not computed: {}; comparisons use only the features listed",
        OMITTED_FEATURES.join(", ")
    )];
    if g.embeddings.is_none() {
        notes.push("no --embeddings: word2vec_similarity omitted".into());
    }
    notes.push("features are standardized on each training fold; auprc pools test-fold scores".into());
    let published = domain.map(|d| {
        results
            .iter()
            .filter_map(|r| {
                published::supervised(d, r.feature_set, r.model).map(|p| SupervisedDelta {
                    feature_set: r.feature_set,
                    model: r.model,
                    delta: published::delta(p, r.precision, r.recall, r.f1, None),
                })
            })
            .collect()
    });
    Ok(SupervisedReport {
        command: "eval-supervised",
        config: echo(g),
        train: *cfg,
        dataset: corpus.counts(),
        warnings: corpus.warnings.clone(),
        notes,
        features: table.names.clone(),
        results,
        published,
    })
}

pub fn print_supervised(r: &SupervisedReport) {
    eprintln!("{:<10} {:<6} {:>9} {:>9} {:>9} {:>9}", "features", "model", "precision", "recall", "f1", "auprc");
    for x in &r.results {
        eprintln!(
            "{:<10} {:<6} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            x.feature_set.name(),
            x.model.short(),
            x.precision,
            x.recall,
            x.f1,
            x.auprc
        );
    }
    if let Some(rows) = &r.published {
        for d in rows {
            eprintln!(
                "{:<10} {:<6} dP {:+7.2} dR {:+7.2} dF1 {:+7.2}",
                d.feature_set.name(),
                d.model.short(),
                d.delta.d_precision,
                d.delta.d_recall,
                d.delta.d_f1
            );
        }
    }
}
