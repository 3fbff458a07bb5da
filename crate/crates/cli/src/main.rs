//! `prereqx` command-line driver.

mod report;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

use prereqx::classify::{self, ModelKind, TrainConfig, TrainedClassifier};
use prereqx::corpus::{load_corpus_with, Corpus, LoadOptions, WikiLinkGraph};
use prereqx::dag::export_dag;
use prereqx::eval::{self, CvConfig};
use prereqx::features::{extract, Embeddings, FeatureSet, FeatureSources, FeatureTable};
use prereqx::matrix::ClosureMode;
use prereqx::pipeline::{analyze, BookAnalysis, PipelineConfig};

/// Used by `export` when no threshold is given.
const DEFAULT_EXPORT_THETA: f64 = 0.06;

#[derive(Parser, Debug)]
#[command(name = "prereqx", version, about = "Mine concept prerequisite relations from a textbook and Wikipedia")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Corpus directory (book.json, concepts.txt, ...).
    #[arg(long, global = true, default_value = ".")]
    corpus: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Fixed threshold on matrix entries.
    #[arg(long, global = true)]
    theta: Option<f64>,
    #[arg(long = "k-folds", global = true, default_value_t = 5)]
    k_folds: usize,
    /// Skip the teaching-order filter.
    #[arg(long, global = true)]
    no_ordering: bool,
    /// One composition step instead of iterating the closure to a fixpoint.
    #[arg(long, global = true)]
    single_pass_closure: bool,
    /// Classifier: rf, svm, lr or nb. Supervised evaluation runs all four
    /// when omitted.
    #[arg(long, global = true)]
    model: Option<ModelKind>,
    /// Feature set. Supervised evaluation runs gtc and proposed when omitted.
    #[arg(long, global = true, value_enum)]
    features: Option<Features>,
    /// Word vectors in text format, enabling the embedding similarity feature.
    #[arg(long, global = true)]
    embeddings: Option<PathBuf>,
    /// Read pairs.csv as (prerequisite, dependent) instead of (dependent, prerequisite).
    #[arg(long, global = true)]
    flip_pairs: bool,
    /// Benchmark domain (geometry, physics, precalculus) for side-by-side deltas.
    #[arg(long, global = true)]
    domain: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Features {
    Gtc,
    Proposed,
    BookOnly,
}

impl From<Features> for FeatureSet {
    fn from(f: Features) -> Self {
        match f {
            Features::Gtc => FeatureSet::Gtc,
            Features::Proposed => FeatureSet::Proposed,
            Features::BookOnly => FeatureSet::BookOnly,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Place every concept in the book; writes placements.json.
    Resolve {
        /// Include each concept's content section text.
        #[arg(long)]
        with_content: bool,
    },
    /// Prerequisite matrix; writes matrix.json.
    Matrix,
    /// Pair features; writes features.csv.
    Features,
    /// Threshold method and link-based baselines; writes report.json and prcurve*.csv.
    EvalStat,
    /// Cross-validated classifiers; writes report.json.
    EvalSupervised {
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 200)]
        trees: usize,
    },
    /// Precision, recall and F1 over the threshold grid; writes prcurve.csv.
    Sweep,
    /// Prerequisite DAG; writes dag.dot and dag.json.
    Export,
    /// Fit one classifier on all labeled pairs; writes model.json.
    Train {
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 200)]
        trees: usize,
        /// Train on an existing features.csv instead of the corpus.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Score pairs with a saved model; writes predictions.csv.
    Predict {
        /// Model file written by `train`.
        #[arg(long = "model-file")]
        model_file: Option<PathBuf>,
        /// Score an existing features.csv instead of the corpus pairs.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

impl Global {
    fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            ordering: !self.no_ordering,
            closure: if self.single_pass_closure {
                ClosureMode::SinglePass
            } else {
                ClosureMode::Fixpoint
            },
        }
    }

    fn cv(&self) -> CvConfig {
        CvConfig {
            k: self.k_folds,
            seed: self.seed,
            stratified: true,
        }
    }

    fn load(&self) -> Result<Corpus> {
        let corpus = load_corpus_with(&self.corpus, LoadOptions { flip_pairs: self.flip_pairs })
            .map_err(prereqx::Error::from)
            .with_context(|| format!("loading corpus {}", self.corpus.display()))?;
        Ok(corpus)
    }

    fn embeddings(&self) -> Result<Option<Embeddings>> {
        let Some(path) = &self.embeddings else { return Ok(None) };
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let e = Embeddings::parse(BufReader::new(file))
            .map_err(prereqx::Error::from)
            .with_context(|| format!("reading {}", path.display()))?;
        Ok(Some(e))
    }

    fn out_file(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(self.out.join(name))
    }

    fn theta(&self) -> Result<Option<f64>> {
        match self.theta {
            Some(t) if !(0.0..=1.0).contains(&t) => bail!("--theta must lie in [0, 1], got {t}"),
            t => Ok(t),
        }
    }
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    write_text(path, &body)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn links_or_bail(corpus: &Corpus, what: &str) -> Result<WikiLinkGraph> {
    match &corpus.links {
        Some(g) => Ok(g.clone()),
        None => bail!("{what} needs links.tsv in the corpus directory"),
    }
}

fn feature_table(g: &Global, corpus: &Corpus, analysis: &BookAnalysis) -> Result<FeatureTable> {
    let graph = links_or_bail(corpus, "feature extraction")?;
    let embeddings = g.embeddings()?;
    let sources = FeatureSources {
        concepts: &corpus.concepts,
        graph: &graph,
        pages: &analysis.pages,
        embeddings: embeddings.as_ref(),
        book: Some((&analysis.omega, analysis.ranks())),
    };
    let table = extract(&sources, &corpus.pairs);
    let missing = table.rows.iter().filter(|r| r.missing_page).count();
    if missing > 0 {
        warn!("{missing} pair(s) touch a concept without a Wikipedia page; their text features are zero");
    }
    Ok(table)
}

fn read_table(path: &Path) -> Result<FeatureTable> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    FeatureTable::read_csv(BufReader::new(f))
        .map_err(prereqx::Error::from)
        .with_context(|| format!("reading {}", path.display()))
}

fn train_config(c: f64, trees: usize) -> Result<TrainConfig> {
    if !(c > 0.0) {
        bail!("--c must be positive");
    }
    if trees == 0 {
        bail!("--trees must be positive");
    }
    Ok(TrainConfig {
        c,
        trees,
        ..TrainConfig::default()
    })
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    if g.k_folds < 2 {
        bail!("--k-folds must be at least 2");
    }
    let theta = g.theta()?;
    match cli.command {
        Command::Resolve { with_content } => {
            let corpus = g.load()?;
            let a = analyze(&corpus, g.pipeline());
            let rows = report::placements(&corpus, &a, with_content);
            write_json(&g.out_file("placements.json")?, &rows)
        }
        Command::Matrix => {
            let corpus = g.load()?;
            let a = analyze(&corpus, g.pipeline());
            write_json(&g.out_file("matrix.json")?, &a.omega.to_json(&corpus.concepts))
        }
        Command::Features => {
            let corpus = g.load()?;
            let a = analyze(&corpus, g.pipeline());
            let table = feature_table(&g, &corpus, &a)?;
            let set = g.features.map_or(FeatureSet::Proposed, FeatureSet::from);
            let path = g.out_file("features.csv")?;
            let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            table
                .select(set)
                .write_csv(BufWriter::new(f))
                .map_err(prereqx::Error::from)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::EvalStat => {
            let corpus = g.load()?;
            let r = report::statistical(&g, &corpus, theta)?;
            for (file, curve) in &r.curves {
                let mut w = csv_writer(&g.out_file(file)?)?;
                w.write_record(["recall", "precision"])?;
                for p in curve {
                    w.write_record([p.recall.to_string(), p.precision.to_string()])?;
                }
                w.flush()?;
                eprintln!("wrote {}", g.out.join(file).display());
            }
            report::print_statistical(&r.report);
            write_json(&g.out_file("report.json")?, &r.report)
        }
        Command::EvalSupervised { c, trees } => {
            let corpus = g.load()?;
            let cfg = train_config(c, trees)?;
            let r = report::supervised(&g, &corpus, &cfg)?;
            report::print_supervised(&r);
            write_json(&g.out_file("report.json")?, &r)
        }
        Command::Sweep => {
            let corpus = g.load()?;
            let a = analyze(&corpus, g.pipeline());
            let rows = eval::sweep(&eval::matrix_scores(&a.omega, &corpus.pairs), &eval::pair_labels(&corpus.pairs))
                .map_err(prereqx::Error::from)?;
            let mut w = csv_writer(&g.out_file("prcurve.csv")?)?;
            w.write_record(["theta", "recall", "precision", "f1"])?;
            for r in rows {
                w.write_record([r.theta.to_string(), r.recall.to_string(), r.precision.to_string(), r.f1.to_string()])?;
            }
            w.flush()?;
            eprintln!("wrote {}", g.out.join("prcurve.csv").display());
            Ok(())
        }
        Command::Export => {
            let corpus = g.load()?;
            let a = analyze(&corpus, g.pipeline());
            let theta = theta.unwrap_or_else(|| {
                eprintln!(
                    "NOTICE: no --theta given; using the untuned default {DEFAULT_EXPORT_THETA}. \
                     Tune it with `prereqx eval-stat` or `prereqx sweep` for this book."
                );
                DEFAULT_EXPORT_THETA
            });
            let dag = export_dag(&a.omega, theta, &corpus.concepts).map_err(prereqx::Error::from)?;
            write_text(&g.out_file("dag.dot")?, &dag.to_dot())?;
            write_json(&g.out_file("dag.json")?, &dag)
        }
        Command::Train { c, trees, table } => {
            let cfg = train_config(c, trees)?;
            let data = match table {
                Some(path) => read_table(&path)?,
                None => {
                    let corpus = g.load()?;
                    let a = analyze(&corpus, g.pipeline());
                    feature_table(&g, &corpus, &a)?
                }
            };
            let set = g.features.map_or(FeatureSet::Proposed, FeatureSet::from);
            let kind = g.model.unwrap_or(ModelKind::RandomForest);
            let model = classify::train(&data.select(set), kind, g.seed, &cfg).map_err(prereqx::Error::from)?;
            write_json(&g.out_file("model.json")?, &model)
        }
        Command::Predict { model_file, table } => {
            let path = model_file.unwrap_or_else(|| g.out.join("model.json"));
            let raw = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let model: TrainedClassifier =
                serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
            let data = match table {
                Some(path) => read_table(&path)?,
                None => {
                    let corpus = g.load()?;
                    let a = analyze(&corpus, g.pipeline());
                    feature_table(&g, &corpus, &a)?
                }
            };
            let keep: Vec<usize> = model
                .feature_schema
                .iter()
                .map(|name| {
                    data.column(name)
                        .with_context(|| format!("feature {name:?} required by the model is missing"))
                })
                .collect::<Result<_>>()?;
            let view = FeatureTable {
                names: model.feature_schema.clone(),
                rows: data
                    .rows
                    .iter()
                    .map(|r| prereqx::features::FeatureRow {
                        values: keep.iter().map(|&i| r.values[i]).collect(),
                        ..r.clone()
                    })
                    .collect(),
            };
            let preds = classify::predict(&model, &view).map_err(prereqx::Error::from)?;
            let out = g.out_file("predictions.csv")?;
            let mut w = csv_writer(&out)?;
            w.write_record(["target", "candidate", "label", "predicted", "score"])?;
            for (r, p) in view.rows.iter().zip(preds) {
                w.write_record([
                    r.target.clone(),
                    r.candidate.clone(),
                    r.label.map(|l| l.to_string()).unwrap_or_default(),
                    p.label.to_string(),
                    p.score.to_string(),
                ])?;
            }
            w.flush()?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        let _ = writeln!(std::io::stderr(), "error: {e:#}");
        std::process::exit(1);
    }
}
