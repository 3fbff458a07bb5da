use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/mini_physics")
}

fn prereqx(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prereqx"))
        .args(args)
        .arg("--corpus")
        .arg(fixture())
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn ok(args: &[&str], out: &Path) -> String {
    let o = prereqx(args, out);
    let stderr = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(o.status.success(), "{args:?}: {stderr}");
    stderr
}

#[test]
fn unknown_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = prereqx(&["eval-stat", "--frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn bad_corpus_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_prereqx"))
        .args(["matrix", "--corpus"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corpus:"));
}

#[test]
fn sweep_has_51_rows() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sweep"], dir.path());
    let body = fs::read_to_string(dir.path().join("prcurve.csv")).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "theta,recall,precision,f1");
    assert_eq!(lines.len(), 52);
    assert!(lines[51].starts_with("1,"));
}

#[test]
fn resolve_and_matrix_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["resolve"], dir.path());
    let p: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("placements.json")).unwrap()).unwrap();
    assert_eq!(p.as_array().unwrap().len(), 12);
    assert_eq!(p[3]["concept"], "velocity");
    assert_eq!(p[3]["rho"], "2.1");
    assert!(p[3].get("sigma").is_none());

    ok(&["resolve", "--with-content"], dir.path());
    let p: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("placements.json")).unwrap()).unwrap();
    assert!(p[3]["sigma"].as_str().unwrap().contains("velocity"));

    ok(&["matrix", "--no-ordering"], dir.path());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("matrix.json")).unwrap()).unwrap();
    assert_eq!(m["stage"], "closed");
    assert_eq!(m["values"].as_array().unwrap().len(), 12);
}

#[test]
fn export_warns_about_default_theta() {
    let dir = tempfile::tempdir().unwrap();
    let stderr = ok(&["export"], dir.path());
    assert!(stderr.contains("NOTICE"));
    let stderr = ok(&["export", "--theta", "0.05"], dir.path());
    assert!(!stderr.contains("NOTICE"));
    let dag: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("dag.json")).unwrap()).unwrap();
    assert_eq!(dag["theta"], 0.05);
    assert_eq!(dag["topological_order"].as_array().unwrap().len(), 12);
    assert!(fs::read_to_string(dir.path().join("dag.dot")).unwrap().starts_with("digraph"));
}

#[test]
fn features_train_predict() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["features", "--features", "book-only"], dir.path());
    let csv = fs::read_to_string(dir.path().join("features.csv")).unwrap();
    assert!(csv.starts_with("target,candidate,label,book_tfidf,order_diff\n"));
    assert_eq!(csv.lines().count(), 133);

    let table = dir.path().join("features.csv");
    let table = table.to_str().unwrap();
    ok(&["train", "--model", "lr", "--table", table], dir.path());
    let model: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("model.json")).unwrap()).unwrap();
    assert_eq!(model["kind"], "logistic_regression");
    assert_eq!(model["seed"], 42);

    // full feature table from the corpus; the model picks its own columns
    ok(&["predict"], dir.path());
    let preds = fs::read_to_string(dir.path().join("predictions.csv")).unwrap();
    assert_eq!(preds.lines().next().unwrap(), "target,candidate,label,predicted,score");
    assert_eq!(preds.lines().count(), 133);
}

#[test]
fn eval_stat_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["eval-stat", "--theta", "0.06", "--domain", "physics"], dir.path());
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(r["headline"], "proposed");
    assert_eq!(r["config"]["seed"], 42);
    assert_eq!(r["config"]["k_folds"], 5);
    let methods: Vec<&str> = r["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["proposed", "proposed-no-ordering", "refd-equal", "refd-tfidf"]);
    assert_eq!(r["methods"][0]["f1"], 1.0);
    assert_eq!(r["fixed_theta"]["theta"], 0.06);
    assert_eq!(r["published"]["published_theta"], 0.12);
    let curve = fs::read_to_string(dir.path().join("prcurve.csv")).unwrap();
    assert!(curve.starts_with("recall,precision\n"));
    assert!(dir.path().join("prcurve-refd-tfidf.csv").exists());
}

#[test]
fn unknown_domain_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = prereqx(&["eval-stat", "--domain", "chemistry"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
